#include "stochlab/green.hpp"

#include "stochlab/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace stochlab {

namespace {

/// Least-squares slope/intercept of y against x.
struct LineFit {
    double slope = 0.0, intercept = 0.0;
    bool ok = false;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    LineFit f;
    std::size_t n = x.size();
    if (n < 3) return f;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double det = n * sxx - sx * sx;
    if (std::fabs(det) < 1e-30) return f;
    f.slope = (n * sxy - sx * sy) / det;
    f.intercept = (sy * sxx - sx * sxy) / det;
    f.ok = true;
    return f;
}

}  // namespace

const char* to_string(Criticality c) {
    switch (c) {
        case Criticality::Subcritical: return "subcritical";
        case Criticality::Critical: return "critical";
        default: return "inconclusive";
    }
}

const char* to_string(L1Verdict v) {
    switch (v) {
        case L1Verdict::Liouville: return "L1-Liouville";
        case L1Verdict::NotLiouville: return "not-L1-Liouville";
        default: return "inconclusive";
    }
}

// ---------------------------------------------------------------------------
// SymmetricGreenKernel

SymmetricGreenKernel::SymmetricGreenKernel(OperatorSpec spec) : spec_(std::move(spec)) {
    reflecting_ = spec_.coeffs.left == LeftBoundary::RegularReflecting;
}

std::optional<SymmetricGreenKernel> SymmetricGreenKernel::build(const OperatorSpec& spec) {
    if (!symmetric_compatible(spec)) return std::nullopt;
    SymmetricGreenKernel k(spec);
    double anchor = spec.coeffs.r_min + 1.0;
    auto w = [&k](double t) { return k.log_weight(t); };
    auto right = quad::log_integrate_tail(w, anchor);
    bool right_finite = right.cls == quad::TailClass::Converged;
    if (k.reflecting_ || spec.coeffs.left == LeftBoundary::DirichletAtRmin) {
        // a Dirichlet left end always yields a minimal Green function
        k.subcritical_ = right_finite || spec.coeffs.left == LeftBoundary::DirichletAtRmin;
    } else {
        auto leftr = quad::log_integrate_tail_left(w, anchor);
        k.subcritical_ = right_finite || leftr.cls == quad::TailClass::Converged;
    }
    return k;
}

double SymmetricGreenKernel::log_weight(double t) const {
    return -std::log(spec_.coeffs.a(t)) - spec_.coeffs.log_v(t);
}

double SymmetricGreenKernel::log_psi(double r) const {
    auto res = quad::log_integrate_tail([this](double t) { return log_weight(t); }, r);
    if (res.cls != quad::TailClass::Converged) return kInf;
    return res.log_value;
}

double SymmetricGreenKernel::psi(double r) const {
    double lp = log_psi(r);
    return lp == kInf ? kInf : std::exp(lp);
}

double SymmetricGreenKernel::log_phi_minimal(double r) const {
    auto res = quad::log_integrate_tail_left([this](double t) { return log_weight(t); }, r);
    if (res.cls != quad::TailClass::Converged) return kInf;
    return res.log_value;
}

double SymmetricGreenKernel::minimal(double x, double y) const {
    if (!subcritical_) throw PreconditionError("minimal Green: spec is critical");
    double rho_y = spec_.rho(y);
    double lo = std::min(x, y), hi = std::max(x, y);
    if (reflecting_) return std::exp(log_psi(hi)) / rho_y;
    if (spec_.coeffs.left == LeftBoundary::DirichletAtRmin) {
        auto f = [this](double t) { return std::exp(log_weight(t)); };
        double phi = quad::adaptive(f, spec_.coeffs.r_min, lo);
        double psi_hi = psi(hi);
        if (psi_hi == kInf) return phi / rho_y;
        double psi_lo = psi(lo);
        return phi * psi_hi / (phi + psi_lo) / rho_y;
    }
    // entire line
    double lphi = log_phi_minimal(lo);
    double lpsi = log_psi(hi);
    if (lphi == kInf && lpsi == kInf) throw PreconditionError("minimal Green: spec is critical");
    if (lpsi == kInf) return std::exp(lphi) / rho_y;
    if (lphi == kInf) return std::exp(lpsi) / rho_y;
    double lW = logaddexp(log_phi_minimal(hi), lpsi);  // Phi(z)+Psi(z) at z = hi
    return std::exp(lphi + lpsi - lW) / rho_y;
}

double SymmetricGreenKernel::truncated(double x, double y, double R) const {
    double log_rho_y = std::log(spec_.rho(y));
    double lo = std::min(x, y), hi = std::max(x, y);
    auto f = [this](double t) { return std::exp(log_weight(t)); };
    if (reflecting_) {
        double val = quad::adaptive(f, hi, R);
        return std::max(0.0, val) / std::exp(log_rho_y);
    }
    double left_end = (spec_.coeffs.left == LeftBoundary::EntireLine) ? -R : spec_.coeffs.r_min;
    double phi = quad::adaptive(f, left_end, lo);
    double psi = quad::adaptive(f, hi, R);
    double W = phi + quad::adaptive(f, lo, R);
    return phi * psi / W / std::exp(log_rho_y);
}

std::vector<double> SymmetricGreenKernel::log_psi_to_R(const Grid1D& grid) const {
    const std::size_t n = grid.size();
    std::vector<double> out(n, -kInf);
    double log_half_h = std::log(0.5 * grid.h);
    double w_next = log_weight(grid.nodes[n - 1]);
    for (std::size_t i = n - 1; i-- > 0;) {
        double w_i = log_weight(grid.nodes[i]);
        double cell = log_half_h + logaddexp(w_i, w_next);
        out[i] = logaddexp(out[i + 1], cell);
        w_next = w_i;
    }
    return out;
}

std::vector<double> SymmetricGreenKernel::log_phi_from_lo(const Grid1D& grid) const {
    const std::size_t n = grid.size();
    std::vector<double> out(n, -kInf);
    double log_half_h = std::log(0.5 * grid.h);
    double w_prev = log_weight(grid.nodes[0]);
    for (std::size_t i = 1; i < n; ++i) {
        double w_i = log_weight(grid.nodes[i]);
        double cell = log_half_h + logaddexp(w_prev, w_i);
        out[i] = logaddexp(out[i - 1], cell);
        w_prev = w_i;
    }
    return out;
}

// ---------------------------------------------------------------------------
// closed-form tables

namespace {

GreenTable closed_form_table(const OperatorSpec& spec, const Grid1D& grid, int y_index,
                             bool minimal) {
    auto kern = SymmetricGreenKernel::build(spec);
    if (!kern)
        throw PreconditionError("green_closed_form: spec is not symmetric-compatible");
    GreenTable t;
    t.grid = grid;
    t.y_index = y_index;
    t.route = GreenRoute::ClosedForm;
    t.truncated_at_R = !minimal;
    if (minimal && !kern->subcritical()) {
        t.verdict = Criticality::Critical;
        return t;
    }
    t.verdict = Criticality::Subcritical;

    const std::size_t n = grid.size();
    double y = grid.nodes[static_cast<std::size_t>(y_index)];
    double log_rho_y = std::log(spec.rho(y));
    t.values.assign(n, 0.0);

    std::vector<double> lpsi = kern->log_psi_to_R(grid);
    if (minimal) {
        double tail = kern->log_psi(grid.R);  // finite iff subcritical at +inf
        if (tail < kInf)
            for (auto& lv : lpsi) lv = logaddexp(lv, tail);
    }
    if (kern->reflecting()) {
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t hi = std::max(i, static_cast<std::size_t>(y_index));
            t.values[i] = std::exp(lpsi[hi] - log_rho_y);
        }
        return t;
    }
    std::vector<double> lphi = kern->log_phi_from_lo(grid);
    if (minimal && spec.coeffs.left == LeftBoundary::EntireLine) {
        auto left = quad::log_integrate_tail_left(
            [&](double s) { return -std::log(spec.coeffs.a(s)) - spec.coeffs.log_v(s); },
            grid.r_min);
        if (left.cls == quad::TailClass::Converged)
            for (auto& lv : lphi) lv = logaddexp(lv, left.log_value);
        else
            for (auto& lv : lphi) lv = kInf;
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t lo = std::min(i, static_cast<std::size_t>(y_index));
        std::size_t hi = std::max(i, static_cast<std::size_t>(y_index));
        if (lphi[lo] == kInf) {
            t.values[i] = std::exp(lpsi[hi] - log_rho_y);
        } else if (lpsi[hi] == kInf) {
            t.values[i] = std::exp(lphi[lo] - log_rho_y);
        } else {
            double lW = logaddexp(lphi[hi], lpsi[hi]);
            t.values[i] = std::exp(lphi[lo] + lpsi[hi] - lW - log_rho_y);
        }
    }
    return t;
}

}  // namespace

GreenTable green_closed_form(const OperatorSpec& spec, const Grid1D& grid, int y_index) {
    return closed_form_table(spec, grid, y_index, false);
}

GreenTable green_closed_form_minimal(const OperatorSpec& spec, const Grid1D& grid, int y_index) {
    return closed_form_table(spec, grid, y_index, true);
}

// ---------------------------------------------------------------------------
// time route

namespace {

struct TimeIntegral {
    std::vector<double> values;  ///< running integral on the full grid
    std::vector<double> k_final; ///< final-time state
    double tail_slope = 0.0;     ///< fitted integrand value at t_max
    double tail_exponent = 0.0;  ///< fitted power component
    double decay_rate = 0.0;     ///< fitted exponential component (>= 0)
    double tail_time = kInf;     ///< tail integral per unit k(t_max); inf when non-decaying
    double running_at_probe = 0.0;
    double probe_final = 0.0;
};

/// Integrates e^{-tP} u0 over [0, t_max] with a geometric startup ramp over
/// the first macro step and a fitted power tail at the probe node.
TimeIntegral integrate_in_time(const DiscreteOperator& op, std::vector<double> u_full,
                               double t_max, double dt, int probe_index) {
    const std::size_t n = op.active_count();
    const std::size_t off = static_cast<std::size_t>(op.i_lo);
    std::vector<double> u(n);
    for (std::size_t k = 0; k < n; ++k) u[k] = u_full[off + k];

    std::vector<double> acc(n, 0.0);
    long n_macro = std::lround(t_max / dt);
    if (n_macro < 8) throw PreconditionError("time integration: t_max too small for dt");

    const std::size_t pk = static_cast<std::size_t>(probe_index) - off;
    std::size_t stride = std::max<long>(1, n_macro / 4096);
    std::vector<double> ts, ks;
    double t = 0.0;

    auto advance = [&](const TridiagFactor& fac, double step) {
        for (std::size_t k = 0; k < n; ++k) acc[k] += 0.5 * step * u[k];
        fac.solve(u);
        for (std::size_t k = 0; k < n; ++k) acc[k] += 0.5 * step * u[k];
        t += step;
    };

    // geometric startup ramp covering exactly the first macro step
    const double ramp[] = {1.0 / 32, 1.0 / 32, 1.0 / 16, 1.0 / 8, 1.0 / 4, 1.0 / 2};
    for (double f : ramp) {
        TridiagFactor fac(op, f * dt);
        advance(fac, f * dt);
    }
    TridiagFactor fac(op, dt);
    for (long s = 1; s < n_macro; ++s) {
        advance(fac, dt);
        if (s % static_cast<long>(stride) == 0 || s + 1 == n_macro) {
            ts.push_back(t);
            ks.push_back(u[pk]);
        }
    }

    TimeIntegral out;
    out.values.assign(u_full.size(), 0.0);
    for (std::size_t k = 0; k < n; ++k) out.values[off + k] = acc[k];
    out.k_final.assign(u_full.size(), 0.0);
    for (std::size_t k = 0; k < n; ++k) out.k_final[off + k] = u[k];
    out.running_at_probe = acc[pk];
    out.probe_final = u[pk];

    // fit log k = c + p log t - lambda t over the last decade; the exponential
    // component captures the Dirichlet eigen-decay of the truncation, which at
    // desk budgets still carries percent-level Green mass beyond t_max
    std::size_t m = 0;
    double A[3][3] = {};
    double rhs[3] = {};
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (ts[i] < 0.1 * t_max || !(ks[i] > 1e-300)) continue;
        double base[3] = {1.0, std::log(ts[i]), -ts[i]};
        double y = std::log(ks[i]);
        for (int a = 0; a < 3; ++a) {
            rhs[a] += base[a] * y;
            for (int b = 0; b < 3; ++b) A[a][b] += base[a] * base[b];
        }
        ++m;
    }
    if (m >= 8) {
        // direct 3x3 solve (Cramer)
        double det = A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1]) -
                     A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0]) +
                     A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]);
        if (std::fabs(det) > 1e-14) {
            auto solve_col = [&](int col) {
                double B[3][3];
                for (int a = 0; a < 3; ++a)
                    for (int b = 0; b < 3; ++b) B[a][b] = (b == col) ? rhs[a] : A[a][b];
                return (B[0][0] * (B[1][1] * B[2][2] - B[1][2] * B[2][1]) -
                        B[0][1] * (B[1][0] * B[2][2] - B[1][2] * B[2][0]) +
                        B[0][2] * (B[1][0] * B[2][1] - B[1][1] * B[2][0])) /
                       det;
            };
            double c = solve_col(0), p = solve_col(1), lam = std::max(0.0, solve_col(2));
            out.tail_exponent = p;
            out.decay_rate = lam;
            out.tail_slope = std::exp(c + p * std::log(t_max) - lam * t_max);
            double power_rate = (-1.0 - p) / t_max;  // effective rate of a decaying power
            double rate = std::max(lam, power_rate);
            out.tail_time = rate > 1e-12 ? 1.0 / rate : kInf;
        }
    } else {
        out.tail_exponent = -kInf;  // integrand dead before the fit window
        out.tail_slope = 0.0;
        out.tail_time = 0.0;
    }
    return out;
}

}  // namespace

GreenTable green_via_time(const OperatorSpec& spec, const Grid1D& grid, int y_index,
                          double t_max, double dt) {
    if (!(t_max > 0.0)) throw PreconditionError("green_via_time: t_max must be > 0");
    DiscreteOperator op = assemble(spec, grid);
    if (y_index <= op.i_lo || y_index >= op.i_hi)
        throw PreconditionError("green_via_time: y_index must be interior");
    double vy = op.v_nodes[static_cast<std::size_t>(y_index)];
    if (!(vy > 0.0)) throw PreconditionError("green_via_time: v vanishes at the source node");

    std::vector<double> delta(grid.size(), 0.0);
    delta[static_cast<std::size_t>(y_index)] = 1.0 / (vy * grid.h);

    double y = grid.nodes[static_cast<std::size_t>(y_index)];
    int probe = std::min(grid.index_of(y) + static_cast<int>(std::lround(1.0 / grid.h)),
                         op.i_hi - 1);
    TimeIntegral ti = integrate_in_time(op, std::move(delta), t_max, dt, probe);

    GreenTable t;
    t.grid = grid;
    t.y_index = y_index;
    t.route = GreenRoute::TimeIntegrated;
    t.truncated_at_R = true;
    t.t_max = t_max;
    t.tail_slope = ti.tail_slope;
    t.tail_exponent = ti.tail_exponent;
    t.values = std::move(ti.values);

    // subcritical iff the estimated remaining tail is a small fraction of the
    // running integral (the raw end slope is polluted by the truncation's
    // eigen-decay, which vanishes only as R -> infinity)
    double tail_rem = std::isfinite(ti.tail_time) ? ti.tail_slope * ti.tail_time : kInf;
    t.verdict = (tail_rem <= 0.1 * ti.running_at_probe) ? Criticality::Subcritical
                                                        : Criticality::Critical;
    if (t.verdict == Criticality::Subcritical && std::isfinite(ti.tail_time)) {
        double tau = std::min(ti.tail_time, 10.0 * t_max);
        for (std::size_t i = 0; i < t.values.size(); ++i) t.values[i] += ti.k_final[i] * tau;
    }
    return t;
}

// ---------------------------------------------------------------------------
// potentials

GreenPotential green_potential(const OperatorSpec& spec, const Grid1D& grid, const RealFn& mu) {
    GreenPotential gp;
    gp.grid = grid;
    const std::size_t n = grid.size();
    gp.mu.resize(n);
    bool any_positive = false;
    for (std::size_t i = 0; i < n; ++i) {
        gp.mu[i] = mu(grid.nodes[i]);
        if (gp.mu[i] < 0.0) throw PreconditionError("green_potential: mu must be nonnegative");
        if (gp.mu[i] > 0.0) any_positive = true;
    }
    if (!any_positive) throw PreconditionError("green_potential: mu vanishes identically");

    auto kern = SymmetricGreenKernel::build(spec);
    if (kern && kern->reflecting() && kern->subcritical()) {
        // prefix/suffix realization of sum_j psi(max(x,y_j)) mu v h / rho
        std::vector<double> lpsi = kern->log_psi_to_R(grid);
        double lp_tail = kern->log_psi(grid.R);
        for (auto& lv : lpsi) lv = logaddexp(lv, lp_tail);
        std::vector<double> wj(n);
        for (std::size_t j = 0; j < n; ++j) {
            double vj = std::exp(spec.coeffs.log_v(grid.nodes[j]));
            wj[j] = gp.mu[j] * vj * grid.h / spec.rho(grid.nodes[j]);
        }
        // trapezoid endpoints
        wj[0] *= 0.5;
        wj[n - 1] *= 0.5;
        std::vector<double> prefix(n, 0.0), suffix(n + 1, 0.0);
        double run = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            run += wj[j];
            prefix[j] = run;
        }
        for (std::size_t j = n; j-- > 0;)
            suffix[j] = suffix[j + 1] + std::exp(lpsi[j]) * wj[j];
        gp.values.assign(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            gp.values[i] = std::exp(lpsi[i]) * prefix[i] + (i + 1 < n ? suffix[i + 1] : 0.0);
        // tail of the source integral beyond R
        auto tail = quad::integrate_tail(
            [&](double yy) {
                double lp = kern->log_psi(yy);
                if (lp == kInf) return kInf;
                return std::exp(lp + spec.coeffs.log_v(yy)) * mu(yy) / spec.rho(yy);
            },
            grid.R, 1e-8);
        if (tail.cls == quad::TailClass::Converged) {
            for (auto& v : gp.values) v += tail.value;
        } else {
            gp.finite = false;
            gp.note = "source tail beyond R diverges";
        }
        for (double v : gp.values)
            if (!std::isfinite(v) || v > 1e12) gp.finite = false;
        return gp;
    }

    // time route: G_mu = int_0^infty e^{-tP} mu dt by linearity of the column sum
    DiscreteOperator op = assemble(spec, grid);
    std::vector<double> u0(n, 0.0);
    for (int i = op.i_lo; i <= op.i_hi; ++i) u0[static_cast<std::size_t>(i)] = gp.mu[static_cast<std::size_t>(i)];
    int probe = (op.i_lo + op.i_hi) / 2;
    const double t_max = 200.0, dt = 1e-3;
    TimeIntegral ti = integrate_in_time(op, std::move(u0), t_max, dt, probe);
    gp.values = std::move(ti.values);
    if (std::isfinite(ti.tail_time) &&
        ti.tail_slope * ti.tail_time <= 0.1 * std::max(ti.running_at_probe, 1e-300)) {
        double tau = std::min(ti.tail_time, 10.0 * t_max);
        for (std::size_t i = 0; i < gp.values.size(); ++i) gp.values[i] += ti.k_final[i] * tau;
    } else {
        gp.finite = false;
        gp.note = "time integral not saturating";
    }
    for (double v : gp.values)
        if (!std::isfinite(v) || v > 1e12) gp.finite = false;
    return gp;
}

Comparability comparability(const GreenPotential& gmu, const GreenTable& g, double epsilon) {
    if (!(epsilon > 0.0)) throw PreconditionError("comparability: epsilon must be > 0");
    if (gmu.grid.size() != g.grid.size() || std::fabs(gmu.grid.h - g.grid.h) > 1e-14)
        throw PreconditionError("comparability: grids differ");
    double o = g.grid.nodes[static_cast<std::size_t>(g.y_index)];
    double cutoff = g.grid.r_min + 0.9 * (g.grid.R - g.grid.r_min);
    Comparability c{kInf, 0.0};
    for (std::size_t i = 0; i < g.grid.size(); ++i) {
        double x = g.grid.nodes[i];
        if (std::fabs(x - o) <= epsilon || x > cutoff) continue;
        double gv = g.values[i];
        if (!(gv > 0.0)) continue;
        double ratio = gmu.values[i] / gv;
        c.c_low = std::min(c.c_low, ratio);
        c.c_high = std::max(c.c_high, ratio);
    }
    if (c.c_high <= 0.0) throw NumericalError("comparability", "empty probe set");
    return c;
}

// ---------------------------------------------------------------------------
// L1 verdict

L1Report l1_liouville_verdict(const OperatorSpec& spec, const Grid1D& grid, int y_index,
                              std::span<const double> schedule) {
    L1Report rep;
    auto grids = exhaust(grid, schedule);
    double y = grid.nodes[static_cast<std::size_t>(y_index)];
    auto kern = SymmetricGreenKernel::build(spec);

    for (const auto& g : grids) {
        int yi = g.index_of(y);
        double I = 0.0;
        if (kern) {
            double log_rho_y = std::log(spec.rho(y));
            std::vector<double> lpsi = kern->log_psi_to_R(g);
            if (kern->reflecting()) {
                for (std::size_t i = 0; i < g.size(); ++i) {
                    std::size_t hi = std::max(i, static_cast<std::size_t>(yi));
                    double w = (i == 0 || i + 1 == g.size()) ? 0.5 : 1.0;
                    I += w * std::exp(lpsi[hi] + spec.coeffs.log_v(g.nodes[i]) - log_rho_y) * g.h;
                }
            } else {
                std::vector<double> lphi = kern->log_phi_from_lo(g);
                for (std::size_t i = 0; i < g.size(); ++i) {
                    std::size_t lo = std::min(i, static_cast<std::size_t>(yi));
                    std::size_t hi = std::max(i, static_cast<std::size_t>(yi));
                    double lW = logaddexp(lphi[hi], lpsi[hi]);
                    double w = (i == 0 || i + 1 == g.size()) ? 0.5 : 1.0;
                    I += w * std::exp(lphi[lo] + lpsi[hi] - lW + spec.coeffs.log_v(g.nodes[i]) -
                                      log_rho_y) *
                         g.h;
                }
            }
        } else {
            GreenTable gt = green_via_time(spec, g, yi, 200.0, 1e-3);
            for (std::size_t i = 0; i < g.size(); ++i) {
                double w = (i == 0 || i + 1 == g.size()) ? 0.5 : 1.0;
                I += w * gt.values[i] * std::exp(spec.coeffs.log_v(g.nodes[i])) * g.h;
            }
        }
        rep.R.push_back(g.R);
        rep.I.push_back(I);
    }

    std::size_t m = rep.I.size();
    if (m >= 2) {
        rep.last_increment = (rep.I[m - 1] - rep.I[m - 2]) / rep.I[m - 1];
        if (rep.last_increment > 0.05) rep.verdict = L1Verdict::Liouville;
        else if (rep.last_increment < 0.005) rep.verdict = L1Verdict::NotLiouville;
        else rep.verdict = L1Verdict::Inconclusive;
    }
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < m; ++i) {
        lx.push_back(std::log(rep.R[i]));
        ly.push_back(std::log(std::max(rep.I[i], 1e-300)));
    }
    LineFit fit = fit_line(lx, ly);
    if (fit.ok) rep.loglog_slope = fit.slope;
    else if (m == 2) rep.loglog_slope = (ly[1] - ly[0]) / (lx[1] - lx[0]);
    return rep;
}

}  // namespace stochlab
