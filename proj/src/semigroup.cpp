#include "stochlab/semigroup.hpp"

#include <algorithm>
#include <cmath>

namespace stochlab {

namespace {

constexpr double kTimeTol = 1e-9;

std::size_t find_time(const std::vector<double>& times, double t) {
    for (std::size_t j = 0; j < times.size(); ++j)
        if (std::fabs(times[j] - t) <= kTimeTol * std::max(1.0, std::fabs(t))) return j;
    throw PreconditionError("time level " + std::to_string(t) + " not recorded");
}

/// Marches the active part of u_full from t = t0 to t0 + span in steps of dt.
void march(const DiscreteOperator& op, std::vector<double>& u_full, double span, double dt) {
    if (span <= 0.0) return;
    const std::size_t n = op.active_count();
    std::vector<double> u(n);
    for (std::size_t k = 0; k < n; ++k) u[k] = u_full[static_cast<std::size_t>(op.i_lo) + k];

    long full = static_cast<long>(std::floor(span / dt + kTimeTol));
    double rem = span - static_cast<double>(full) * dt;
    if (full > 0) {
        TridiagFactor fac(op, dt);
        for (long s = 0; s < full; ++s) fac.solve(u);
    }
    if (rem > kTimeTol * dt) {
        TridiagFactor fac(op, rem);
        fac.solve(u);
    }
    for (std::size_t k = 0; k < n; ++k) u_full[static_cast<std::size_t>(op.i_lo) + k] = u[k];
}

}  // namespace

std::vector<double> evolve(const DiscreteOperator& op, std::vector<double> f_full, double t,
                           double dt) {
    if (!(t > 0.0) || !(dt > 0.0)) throw PreconditionError("evolve: t and dt must be > 0");
    if (f_full.size() != op.grid.size()) throw PreconditionError("evolve: full-grid vector expected");
    for (double x : f_full)
        if (!std::isfinite(x)) throw PreconditionError("evolve: initial data must be finite");
    // Dirichlet nodes stay pinned at zero
    if (op.i_lo == 1) f_full[0] = 0.0;
    f_full[op.grid.size() - 1] = 0.0;
    march(op, f_full, t, dt);
    return f_full;
}

const std::vector<double>& MassCurve::at(double t) const { return values[find_time(times, t)]; }
const std::vector<double>& KernelSlice::at(double t) const { return values[find_time(times, t)]; }

MassCurve mass_curve(const OperatorSpec& spec, const Grid1D& grid, std::vector<double> times,
                     double dt) {
    if (times.empty()) throw PreconditionError("mass_curve: no times requested");
    double prev = 0.0;
    for (double t : times) {
        if (!(t > prev)) throw PreconditionError("mass_curve: times must be positive increasing");
        prev = t;
    }
    DiscreteOperator op = assemble(spec, grid);
    MassCurve mc;
    mc.grid = grid;
    mc.times = times;
    std::tie(mc.probe_lo, mc.probe_hi) = probe_window(op);

    std::vector<double> u(grid.size(), 1.0);
    if (op.i_lo == 1) u[0] = 0.0;
    u[grid.size() - 1] = 0.0;
    double t_now = 0.0;
    for (double t : times) {
        march(op, u, t - t_now, dt);
        t_now = t;
        mc.values.push_back(u);
    }
    return mc;
}

KernelSlice kernel_slice(const OperatorSpec& spec, const Grid1D& grid, int y_index,
                         std::vector<double> times, double dt) {
    if (times.empty()) throw PreconditionError("kernel_slice: no times requested");
    double prev = 0.0;
    for (double t : times) {
        if (!(t > prev)) throw PreconditionError("kernel_slice: times must be positive increasing");
        prev = t;
    }
    DiscreteOperator op = assemble(spec, grid);
    if (y_index <= op.i_lo || y_index >= op.i_hi)
        throw PreconditionError("kernel_slice: y_index must be interior");
    double vy = op.v_nodes[static_cast<std::size_t>(y_index)];
    if (!(vy > 0.0) || !std::isfinite(vy))
        throw PreconditionError("kernel_slice: measure density invalid at the source node");

    KernelSlice ks;
    ks.grid = grid;
    ks.y_index = y_index;
    ks.dt = dt;
    ks.times = times;
    std::vector<double> u(grid.size(), 0.0);
    u[static_cast<std::size_t>(y_index)] = 1.0 / (vy * grid.h);
    double t_now = 0.0;
    for (double t : times) {
        march(op, u, t - t_now, dt);
        t_now = t;
        ks.values.push_back(u);
    }
    return ks;
}

double chapman_kolmogorov_defect(const DiscreteOperator& op, const KernelSlice& slice, double s,
                                 double t) {
    if (s == 0.0 || t == 0.0) return 0.0;  // identity composition by convention
    const auto& kt = slice.at(t);
    const auto& kst = slice.at(s + t);
    std::vector<double> comp = evolve(op, kt, s, 0.5 * slice.dt);
    double worst = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < kst.size(); ++i) {
        if (kst[i] > 1e-8) {
            any = true;
            worst = std::max(worst, std::fabs(kst[i] - comp[i]) / kst[i]);
        }
    }
    if (!any) throw NumericalError("chapman_kolmogorov", "no probe nodes above threshold");
    return worst;
}

MassVerdict dichotomy_check(const MassCurve& curve, double t, double tol) {
    const auto& m = curve.at(t);
    bool all_one = true, all_below = true;
    for (int i = curve.probe_lo; i <= curve.probe_hi; ++i) {
        double x = m[static_cast<std::size_t>(i)];
        if (x < 1.0 - tol) all_one = false;
        if (x > 1.0 - tol) all_below = false;
    }
    if (all_one) return MassVerdict::AllEqualOne;
    if (all_below) return MassVerdict::AllBelowOne;
    return MassVerdict::Violated;
}

const char* to_string(MassVerdict v) {
    switch (v) {
        case MassVerdict::AllEqualOne: return "all_equal_one";
        case MassVerdict::AllBelowOne: return "all_below_one";
        default: return "violated";
    }
}

}  // namespace stochlab
