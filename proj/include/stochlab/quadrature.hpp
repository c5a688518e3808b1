#pragma once

#include "stochlab/common.hpp"

namespace stochlab::quad {

/// Adaptive Simpson on [a,b] with relative tolerance.
double adaptive(const RealFn& f, double a, double b, double rel_tol = 1e-8,
                int max_depth = 40);

enum class TailClass { Converged, Diverged, Inconclusive };

struct TailResult {
    double value = 0.0;       ///< integral over [a,inf) when converged; partial sum otherwise
    TailClass cls = TailClass::Inconclusive;
    double loglog_slope = 0.0;  ///< fitted d(log f)/d(log r) on the last panels
};

/// Improper integral of a nonnegative integrand over [a,inf).
/// Doubling panels + geometric tail estimate; classifies divergence from the
/// decay of panel masses instead of forcing an answer.
TailResult integrate_tail(const RealFn& f, double a, double rel_tol = 1e-8);

struct LogTailResult {
    double log_value = -kInf;  ///< log of the integral when converged
    TailClass cls = TailClass::Inconclusive;
    double loglog_slope = 0.0;
};

/// Same as integrate_tail for f = exp(w) with w supplied in log space.
/// Panels are anchored at their own max so w may swing by thousands.
LogTailResult log_integrate_tail(const RealFn& w, double a, double rel_tol = 1e-8);

/// Improper integral toward -inf: \int_{-inf}^{a} e^{w}.
LogTailResult log_integrate_tail_left(const RealFn& w, double a, double rel_tol = 1e-8);

}  // namespace stochlab::quad
