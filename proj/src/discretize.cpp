#include "stochlab/discretize.hpp"

#include <cmath>

namespace stochlab {

DiscreteOperator assemble(const OperatorSpec& spec, const Grid1D& grid) {
    const auto& c = spec.coeffs;
    DiscreteOperator op;
    op.grid = grid;
    op.left = c.left;
    const int N = static_cast<int>(grid.size()) - 1;
    const double h = grid.h;

    op.i_lo = (c.left == LeftBoundary::RegularReflecting) ? 0 : 1;
    op.i_hi = N - 1;
    const int n = op.i_hi - op.i_lo + 1;
    if (n < 3) throw PreconditionError("assemble: grid too small");
    op.sub.assign(n, 0.0);
    op.diag.assign(n, 0.0);
    op.super.assign(n, 0.0);

    op.v_nodes.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        // v(r_min) may legitimately vanish at a reflecting pole; elsewhere it
        // must be positive (possibly +inf for rapidly growing densities, which
        // downstream quadratures avoid by working with log_v).
        double v = c.v(grid.nodes[i]);
        if (std::isnan(v) || v < 0.0)
            throw NumericalError("assemble", "measure density invalid at r = " +
                                                 std::to_string(grid.nodes[i]));
        op.v_nodes[i] = v;
    }

    for (int i = op.i_lo; i <= op.i_hi; ++i) {
        double r = grid.nodes[static_cast<std::size_t>(i)];
        double rho = spec.rho(r);
        int k = i - op.i_lo;
        if (i == 0) {
            // reflecting pole: ghost reflection u_{-1} = u_1 kills the odd part of
            // the drift; its even part survives through lim (r-r_min) b(r).
            double ae = c.a(r) - c.pole_drift_limit;
            if (!(ae > 0.0)) throw NumericalError("assemble", "reflecting row lost ellipticity");
            op.super[k] = rho * (-2.0 * ae / (h * h));
            op.diag[k] = -op.super[k];
            continue;
        }
        double a = c.a(r), b = c.b(r);
        if (!std::isfinite(a) || !std::isfinite(b) || !(a > 0.0))
            throw NumericalError("assemble", "coefficient evaluation failed at r = " +
                                                 std::to_string(r));
        double s, S;
        if (h * std::fabs(b) <= 2.0 * a) {
            s = rho * (-a / (h * h) - b / (2.0 * h));
            S = rho * (-a / (h * h) + b / (2.0 * h));
        } else {
            ++op.upwind_nodes;
            if (b > 0.0) {
                s = rho * (-a / (h * h) - b / h);
                S = rho * (-a / (h * h));
            } else {
                s = rho * (-a / (h * h));
                S = rho * (-a / (h * h) + b / h);
            }
        }
        if (s > 0.0 || S > 0.0)
            throw NumericalError("assemble", "M-matrix sign pattern violated at r = " +
                                                 std::to_string(r));
        op.sub[k] = s;
        op.super[k] = S;
        op.diag[k] = -(s + S);  // exact zero row sum
    }
    op.scheme = (op.upwind_nodes > 0) ? Scheme::Upwind : Scheme::Central;

    // Dirichlet rows were removed; remember the dropped couplings for stencil
    // application on full samples.
    op.right_coupling = op.super[n - 1];
    op.super[n - 1] = 0.0;
    if (op.i_lo == 1) {
        op.left_coupling = op.sub[0];
        op.sub[0] = 0.0;
    }
    return op;
}

std::vector<double> DiscreteOperator::apply(std::span<const double> u_full) const {
    if (u_full.size() != grid.size())
        throw PreconditionError("apply: expected a full-grid vector");
    std::vector<double> out(grid.size(), 0.0);
    const int n = static_cast<int>(active_count());
    for (int k = 0; k < n; ++k) {
        int i = i_lo + k;
        double acc = diag[k] * u_full[static_cast<std::size_t>(i)];
        if (k > 0) acc += sub[k] * u_full[static_cast<std::size_t>(i - 1)];
        if (k < n - 1) acc += super[k] * u_full[static_cast<std::size_t>(i + 1)];
        if (k == 0 && i_lo == 1) acc += left_coupling * u_full[0];
        if (k == n - 1) acc += right_coupling * u_full[grid.size() - 1];
        out[static_cast<std::size_t>(i)] = acc;
    }
    return out;
}

TridiagFactor::TridiagFactor(const DiscreteOperator& op, double tau) {
    const std::size_t n = op.active_count();
    w_.assign(n, 0.0);
    dhat_.assign(n, 0.0);
    upper_.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) upper_[i] = tau * op.super[i];
    dhat_[0] = 1.0 + tau * op.diag[0];
    for (std::size_t i = 1; i < n; ++i) {
        w_[i] = tau * op.sub[i] / dhat_[i - 1];
        dhat_[i] = 1.0 + tau * op.diag[i] - w_[i] * upper_[i - 1];
        if (!(std::fabs(dhat_[i]) > 0.0))
            throw NumericalError("tridiag", "singular pivot (cannot happen for M-matrices)");
    }
}

void TridiagFactor::solve(std::span<double> rhs) const {
    const std::size_t n = dhat_.size();
    if (rhs.size() != n) throw PreconditionError("tridiag solve: size mismatch");
    for (std::size_t i = 1; i < n; ++i) rhs[i] -= w_[i] * rhs[i - 1];
    rhs[n - 1] /= dhat_[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - upper_[i] * rhs[i + 1]) / dhat_[i];
}

std::pair<int, int> probe_window(const DiscreteOperator& op) {
    const int N = static_cast<int>(op.grid.size()) - 1;
    int margin = static_cast<int>(std::ceil(0.1 * N));
    int hi = N - margin;
    int lo = (op.i_lo == 1) ? margin : op.i_lo;
    if (lo > hi) throw PreconditionError("probe_window: grid too small");
    return {lo, hi};
}

}  // namespace stochlab
