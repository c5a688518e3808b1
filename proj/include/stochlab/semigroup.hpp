#pragma once

#include "stochlab/discretize.hpp"

namespace stochlab {

/// Implicit-Euler approximation of e^{-tP} f. Input and output are full-grid
/// vectors; Dirichlet nodes are held at zero. A final partial step lands on t
/// exactly when t is not a multiple of dt.
std::vector<double> evolve(const DiscreteOperator& op, std::vector<double> f_full, double t,
                           double dt);

enum class MassVerdict { AllEqualOne, AllBelowOne, Violated };

/// m(x,t) = (e^{-tP} 1)(x) sampled at the requested times.
struct MassCurve {
    Grid1D grid;
    std::vector<double> times;
    std::vector<std::vector<double>> values;  ///< values[j][i], full grid
    int probe_lo = 0, probe_hi = 0;           ///< window used by verdicts

    const std::vector<double>& at(double t) const;
};

MassCurve mass_curve(const OperatorSpec& spec, const Grid1D& grid,
                     std::vector<double> times, double dt);

/// Kernel column k(., y, t) against the measure v dr, from the discrete delta.
struct KernelSlice {
    Grid1D grid;
    int y_index = 0;
    double dt = 0.0;
    std::vector<double> times;
    std::vector<std::vector<double>> values;  ///< values[j][i], full grid

    const std::vector<double>& at(double t) const;
};

KernelSlice kernel_slice(const OperatorSpec& spec, const Grid1D& grid, int y_index,
                         std::vector<double> times, double dt);

/// Relative Chapman-Kolmogorov defect at (s, t): the s+t slice against the
/// composition of the t slice propagated by s with a half-step reference, so
/// the identity is tested across discretization levels instead of reproducing
/// the algebraic matrix identity. Probes restricted to k(x,y,s+t) > 1e-8.
double chapman_kolmogorov_defect(const DiscreteOperator& op, const KernelSlice& slice, double s,
                                 double t);

/// Classifies m(., t) on the probe window per the sub-Markov dichotomy.
MassVerdict dichotomy_check(const MassCurve& curve, double t, double tol);

const char* to_string(MassVerdict v);

}  // namespace stochlab
