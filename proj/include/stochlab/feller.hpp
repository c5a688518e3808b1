#pragma once

#include "stochlab/semigroup.hpp"

namespace stochlab {

enum class FellerVerdict { Conservative, Explosive, Inconclusive };

/// Classical explosion test for the diffusion generated by -P_rho, evaluated
/// at +infinity. Scale s' = exp(int b/a) is multiplier-free; speed
/// m' = 1/(rho a s'). Explosion iff the exit integral
///   kappa = lim_{x->inf} int_c^x (s(x)-s(y)) m'(y) dy
/// is finite, computed entirely in log space.
struct FellerReport {
    double c = 1.0;
    double r_quad = 1e6;
    double kappa = kInf;
    bool kappa_finite = false;
    FellerVerdict verdict = FellerVerdict::Inconclusive;
    double integrand_slope = 0.0;  ///< log-log slope of the exit integrand at r_quad
    std::string note;
    /// decimated samples for reporting and the covariance invariants
    std::vector<double> r_samples, scale_density, speed_density;
    std::vector<double> log_scale_density, log_speed_density;
};

FellerReport feller_test(const OperatorSpec& spec, double c = 1.0, double r_quad = 1e6);

/// True iff the two classifications match; an inconclusive Feller verdict
/// never blocks (reported separately by callers).
bool oracle_agree(const FellerReport& report, const MassCurve& curve, double t, double tol);

const char* to_string(FellerVerdict v);

}  // namespace stochlab
