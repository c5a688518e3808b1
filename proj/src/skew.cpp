#include "stochlab/skew.hpp"

#include <algorithm>
#include <cmath>

namespace stochlab {

const char* to_string(RuleVerdict v) {
    switch (v) {
        case RuleVerdict::Yes: return "yes";
        case RuleVerdict::No: return "no";
        default: return "undetermined";
    }
}

std::vector<double> product_kernel(const KernelSlice& s1, const KernelSlice& s2, double t) {
    const auto& k1 = s1.at(t);
    const auto& k2 = s2.at(t);
    std::vector<double> out(k1.size() * k2.size());
    for (std::size_t i = 0; i < k1.size(); ++i)
        for (std::size_t j = 0; j < k2.size(); ++j) out[i * k2.size() + j] = k1[i] * k2[j];
    return out;
}

ProductMass product_mass(const MassCurve& m1, const MassCurve& m2) {
    ProductMass pm;
    pm.n1 = m1.grid.size();
    pm.n2 = m2.grid.size();
    for (std::size_t a = 0; a < m1.times.size(); ++a) {
        for (std::size_t b = 0; b < m2.times.size(); ++b) {
            if (std::fabs(m1.times[a] - m2.times[b]) > 1e-12) continue;
            pm.times.push_back(m1.times[a]);
            std::vector<double> v(pm.n1 * pm.n2);
            for (std::size_t i = 0; i < pm.n1; ++i)
                for (std::size_t j = 0; j < pm.n2; ++j)
                    v[i * pm.n2 + j] = m1.values[a][i] * m2.values[b][j];
            pm.values.push_back(std::move(v));
        }
    }
    if (pm.times.empty()) throw PreconditionError("product_mass: no shared time levels");
    return pm;
}

namespace {

/// LU of a banded, strictly diagonally dominant matrix (no pivoting).
class BandedLU {
public:
    BandedLU(std::size_t n, std::size_t k) : n_(n), k_(k), a_((2 * k + 1) * n, 0.0) {}

    double& at(std::size_t i, std::size_t j) { return a_[(j - i + k_) * n_ + i]; }

    void factor() {
        for (std::size_t p = 0; p < n_; ++p) {
            double piv = at(p, p);
            if (!(std::fabs(piv) > 0.0)) throw NumericalError("banded_lu", "zero pivot");
            std::size_t last = std::min(n_ - 1, p + k_);
            for (std::size_t i = p + 1; i <= last; ++i) {
                double m = at(i, p) / piv;
                at(i, p) = m;
                for (std::size_t j = p + 1; j <= std::min(n_ - 1, p + k_); ++j)
                    at(i, j) -= m * at(p, j);
            }
        }
    }

    void solve(std::vector<double>& b) const {
        for (std::size_t i = 0; i < n_; ++i) {
            std::size_t j0 = (i > k_) ? i - k_ : 0;
            double acc = b[i];
            for (std::size_t j = j0; j < i; ++j) acc -= a_[(j - i + k_) * n_ + i] * b[j];
            b[i] = acc;
        }
        for (std::size_t i = n_; i-- > 0;) {
            std::size_t j1 = std::min(n_ - 1, i + k_);
            double acc = b[i];
            for (std::size_t j = i + 1; j <= j1; ++j) acc -= a_[(j - i + k_) * n_ + i] * b[j];
            b[i] = acc / a_[k_ * n_ + i];
        }
    }

private:
    std::size_t n_, k_;
    std::vector<double> a_;  ///< diagonal-major band storage
};

}  // namespace

std::vector<double> tensor_ones(const DiscreteOperator& op1, const DiscreteOperator& op2) {
    std::size_t n1 = op1.grid.size(), n2 = op2.grid.size();
    std::vector<double> u(n1 * n2, 0.0);
    for (int i = op1.i_lo; i <= op1.i_hi; ++i)
        for (int j = op2.i_lo; j <= op2.i_hi; ++j)
            u[static_cast<std::size_t>(i) * n2 + static_cast<std::size_t>(j)] = 1.0;
    return u;
}

std::vector<double> tensor_delta(const DiscreteOperator& op1, const DiscreteOperator& op2,
                                 int y1, int y2) {
    std::size_t n1 = op1.grid.size(), n2 = op2.grid.size();
    double v1 = op1.v_nodes[static_cast<std::size_t>(y1)];
    double v2 = op2.v_nodes[static_cast<std::size_t>(y2)];
    if (!(v1 > 0.0) || !(v2 > 0.0))
        throw PreconditionError("tensor_delta: measure vanishes at the source");
    std::vector<double> u(n1 * n2, 0.0);
    u[static_cast<std::size_t>(y1) * n2 + static_cast<std::size_t>(y2)] =
        1.0 / (v1 * op1.grid.h * v2 * op2.grid.h);
    return u;
}

std::vector<double> evolve2d(const DiscreteOperator& op1, const DiscreteOperator& op2,
                             std::vector<double> u0_flat_full, double t, double dt) {
    const std::size_t n1 = op1.active_count(), n2 = op2.active_count();
    const std::size_t N2 = op2.grid.size();
    if (u0_flat_full.size() != op1.grid.size() * N2)
        throw PreconditionError("evolve2d: flattened full tensor grid expected");

    // pack active block
    std::vector<double> u(n1 * n2);
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j)
            u[i * n2 + j] =
                u0_flat_full[(i + static_cast<std::size_t>(op1.i_lo)) * N2 + j +
                             static_cast<std::size_t>(op2.i_lo)];

    BandedLU lu(n1 * n2, n2);
    for (std::size_t i = 0; i < n1; ++i) {
        for (std::size_t j = 0; j < n2; ++j) {
            std::size_t m = i * n2 + j;
            lu.at(m, m) = 1.0 + dt * (op1.diag[i] + op2.diag[j]);
            if (j > 0) lu.at(m, m - 1) = dt * op2.sub[j];
            if (j + 1 < n2) lu.at(m, m + 1) = dt * op2.super[j];
            if (i > 0) lu.at(m, m - n2) = dt * op1.sub[i];
            if (i + 1 < n1) lu.at(m, m + n2) = dt * op1.super[i];
        }
    }
    lu.factor();

    long steps = std::lround(t / dt);
    if (std::fabs(steps * dt - t) > 1e-9 * std::max(1.0, t))
        throw PreconditionError("evolve2d: t must be a multiple of dt");
    for (long s = 0; s < steps; ++s) lu.solve(u);

    std::vector<double> out(u0_flat_full.size(), 0.0);
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j)
            out[(i + static_cast<std::size_t>(op1.i_lo)) * N2 + j +
                static_cast<std::size_t>(op2.i_lo)] = u[i * n2 + j];
    return out;
}

RuledVerdict product_subcriticality(const DiagnosticsReport& d1, const DiagnosticsReport& d2) {
    bool s1 = d1.criticality == Criticality::Subcritical;
    bool s2 = d2.criticality == Criticality::Subcritical;
    if (s1 || s2) return {RuleVerdict::Yes, "subcritical-transfer (one factor subcritical)"};
    if (d1.criticality == Criticality::Critical && d2.criticality == Criticality::Critical)
        return {RuleVerdict::Undetermined, "both factors critical: transfer lemma silent"};
    return {RuleVerdict::Undetermined, "factor criticality inconclusive"};
}

ProductDiagnostics theorem54_table(const DiagnosticsReport& d1, const DiagnosticsReport& d2,
                                   bool sym1, bool sym2) {
    auto check = [](const DiagnosticsReport& d) {
        if (d.criticality == Criticality::Critical &&
            (d.completeness == CompletenessVerdict::Incomplete ||
             d.l1.verdict == L1Verdict::NotLiouville))
            throw NumericalError("theorem54_table",
                                 "contradictory component verdicts for " + d.label);
    };
    check(d1);
    check(d2);

    ProductDiagnostics pd;
    pd.first_label = d1.label;
    pd.second_label = d2.label;
    pd.subcritical = product_subcriticality(d1, d2);

    bool c1 = d1.completeness == CompletenessVerdict::Complete;
    bool c2 = d2.completeness == CompletenessVerdict::Complete;
    bool i1 = d1.completeness == CompletenessVerdict::Incomplete;
    bool i2 = d2.completeness == CompletenessVerdict::Incomplete;
    if (i1 || i2) pd.complete = {RuleVerdict::No, "incomplete-factor rule (4)"};
    else if (c1 && c2) pd.complete = {RuleVerdict::Yes, "complete-product rule (3)"};
    else pd.complete = {RuleVerdict::Undetermined, "no completeness rule matches"};

    bool l1yes1 = d1.l1.verdict == L1Verdict::Liouville;
    bool l1yes2 = d2.l1.verdict == L1Verdict::Liouville;
    bool l1no1 = d1.l1.verdict == L1Verdict::NotLiouville;
    bool l1no2 = d2.l1.verdict == L1Verdict::NotLiouville;
    bool crit1 = d1.criticality == Criticality::Critical;
    bool crit2 = d2.criticality == Criticality::Critical;

    // The not-L1 rule (1) takes precedence over rule (2): when both fire the
    // product Green function is integrable outright, which settles the verdict.
    if ((l1no1 && sym2) || (l1no2 && sym1)) {
        pd.l1_liouville = {RuleVerdict::No, "not-L1 factor with symmetric partner, rule (1)"};
    } else if ((l1yes1 && sym2) || (l1yes2 && sym1)) {
        pd.l1_liouville = {RuleVerdict::Yes, "L1 factor with symmetric partner, rule (2)"};
    } else if ((crit1 && sym2) || (crit2 && sym1)) {
        pd.l1_liouville = {RuleVerdict::Yes, "critical factor with symmetric partner (corollary)"};
    } else if (c1 && c2 && sym1 && sym2) {
        pd.l1_liouville = {RuleVerdict::Yes, "complete symmetric product, rule (3)"};
    } else {
        pd.l1_liouville = {RuleVerdict::Undetermined, "no L1 rule matches"};
    }
    return pd;
}

}  // namespace stochlab
