#pragma once

#include "stochlab/common.hpp"

#include <vector>

namespace stochlab {

enum class LeftBoundary { RegularReflecting, DirichletAtRmin, EntireLine };

/// Coefficients of P u = -a u'' + b u' against the reference measure v(r) dr.
struct CoefficientField {
    RealFn a;       ///< second-order coefficient, > 0
    RealFn b;       ///< drift
    RealFn v;       ///< measure density, > 0 inside the domain
    RealFn log_v;   ///< log of v; supplied analytically so v may overflow double range
    double r_min = 0.0;
    LeftBoundary left = LeftBoundary::RegularReflecting;
    /// lim_{r -> r_min} (r - r_min) * b(r); finite for a regular pole.
    /// Used by the reflecting closure so singular drifts need no pointwise b(r_min).
    double pole_drift_limit = 0.0;
};

/// An operator P_rho = rho * (-a u'' + b u'); rho == 1 for base specs.
struct OperatorSpec {
    CoefficientField coeffs;
    RealFn rho;
    bool unit_rho = true;
    std::string label;
};

/// Fixture catalog. Names: euclidean_radial(n>=3), hyperbolic_radial(n>=2),
/// rapid_model(alpha>0), drifted_line(beta).
OperatorSpec preset(const std::string& name, const std::vector<double>& params);

/// Multiplies the spec's rho pointwise; coefficients untouched.
OperatorSpec rescale(const OperatorSpec& spec, const RealFn& rho,
                     const std::string& rho_label = "rho");

/// True iff b + a' + a v'/v vanishes at the probe nodes (P symmetric in L2(v dr))
/// and the multiplier is constant, so the kernel is v-symmetric as well.
bool symmetric_compatible(const OperatorSpec& spec, double tol = 1e-10);

struct SkewSpec {
    OperatorSpec first;
    OperatorSpec second;
};

}  // namespace stochlab
