#include "stochlab/feller.hpp"

#include <algorithm>
#include <cmath>

namespace stochlab {

const char* to_string(FellerVerdict v) {
    switch (v) {
        case FellerVerdict::Conservative: return "conservative";
        case FellerVerdict::Explosive: return "explosive";
        default: return "inconclusive";
    }
}

FellerReport feller_test(const OperatorSpec& spec, double c, double r_quad) {
    const auto& cf = spec.coeffs;
    if (cf.left != LeftBoundary::EntireLine && !(c > cf.r_min))
        throw PreconditionError("feller_test: anchor c must be interior");
    if (!(r_quad > 4.0 * c)) throw PreconditionError("feller_test: r_quad too small");

    FellerReport rep;
    rep.c = c;
    rep.r_quad = r_quad;

    // log grid c..r_quad
    const double decades = std::log10(r_quad / c);
    const std::size_t K = std::max<std::size_t>(3000, static_cast<std::size_t>(512 * decades));
    std::vector<double> r(K + 1), ls(K + 1);
    const double g = std::log(r_quad / c) / static_cast<double>(K);
    for (std::size_t k = 0; k <= K; ++k) r[k] = c * std::exp(static_cast<double>(k) * g);

    // Ls(r_k) = int_c^{r_k} b/a dt (cumulative trapezoid)
    ls[0] = 0.0;
    double f_prev = cf.b(r[0]) / cf.a(r[0]);
    for (std::size_t k = 1; k <= K; ++k) {
        double f_cur = cf.b(r[k]) / cf.a(r[k]);
        ls[k] = ls[k - 1] + 0.5 * (r[k] - r[k - 1]) * (f_prev + f_cur);
        f_prev = f_cur;
    }

    // report samples (decimated), overflow-tolerant in the linear fields
    const std::size_t stride = std::max<std::size_t>(1, K / 256);
    for (std::size_t k = 0; k <= K; k += stride) {
        double lm = -std::log(spec.rho(r[k]) * cf.a(r[k])) - ls[k];
        rep.r_samples.push_back(r[k]);
        rep.log_scale_density.push_back(ls[k]);
        rep.log_speed_density.push_back(lm);
        rep.scale_density.push_back(std::exp(ls[k]));
        rep.speed_density.push_back(std::exp(lm));
    }

    // s(inf) classification: exp(Ls) ~ r^sigma with sigma = dLs/dlnr at the end.
    // sigma >= -1 means the scale function diverges, so +inf is inaccessible.
    std::size_t tail_lo = K;
    while (tail_lo > 0 && r[tail_lo] > 0.1 * r_quad) --tail_lo;
    double sigma = (ls[K] - ls[tail_lo]) / std::log(r[K] / r[tail_lo]);
    if (sigma >= -0.95) {
        rep.verdict = FellerVerdict::Conservative;
        rep.note = "scale function diverges at +inf";
        rep.kappa = kInf;
        rep.kappa_finite = false;
        return rep;
    }
    if (sigma >= -1.05) {
        rep.verdict = FellerVerdict::Inconclusive;
        rep.note = "scale integral within 0.05 of the critical decay rate";
        rep.kappa = kInf;
        rep.kappa_finite = false;
        return rep;
    }

    // anchored backward tail T_k = int_{r_k}^{r_quad} exp(Ls - Ls_k) dt plus the
    // fitted power tail beyond r_quad. Cells use the exponential-fit integral
    // dr * expm1(d)/d, exact when Ls is locally linear in r; a plain trapezoid
    // overshoots badly once Ls drops by >> 1 across one wide log-grid cell.
    std::vector<double> T(K + 1, 0.0);
    T[K] = r[K] / (-1.0 - sigma);
    for (std::size_t k = K; k-- > 0;) {
        double d = ls[k + 1] - ls[k];
        double dr = r[k + 1] - r[k];
        double cell = (std::fabs(d) < 1e-12) ? dr : dr * std::expm1(d) / d;
        T[k] = cell + std::exp(d) * T[k + 1];
    }

    // exit integrand g = (s(inf)-s(y)) m'(y);  log g = log T - log(rho a)
    std::vector<double> lg(K + 1);
    for (std::size_t k = 0; k <= K; ++k)
        lg[k] = std::log(T[k]) - std::log(spec.rho(r[k]) * cf.a(r[k]));

    double p_hat = (lg[K] - lg[tail_lo]) / std::log(r[K] / r[tail_lo]);
    rep.integrand_slope = p_hat;

    // trapezoid of exp(lg) in log space
    double log_kappa = -kInf;
    for (std::size_t k = 1; k <= K; ++k) {
        double cell = std::log(0.5 * (r[k] - r[k - 1])) + logaddexp(lg[k - 1], lg[k]);
        log_kappa = logaddexp(log_kappa, cell);
    }

    if (p_hat < -1.1) {
        double log_tail = lg[K] + std::log(r[K] / (-1.0 - p_hat));
        rep.kappa = std::exp(logaddexp(log_kappa, log_tail));
        rep.kappa_finite = true;
        rep.verdict = FellerVerdict::Explosive;
    } else if (p_hat > -0.9) {
        rep.kappa = kInf;
        rep.kappa_finite = false;
        rep.verdict = FellerVerdict::Conservative;
    } else {
        rep.kappa = kInf;
        rep.kappa_finite = false;
        rep.verdict = FellerVerdict::Inconclusive;
        rep.note = "exit integrand within 0.1 of the critical slope -1";
    }
    return rep;
}

bool oracle_agree(const FellerReport& report, const MassCurve& curve, double t, double tol) {
    if (report.verdict == FellerVerdict::Inconclusive) return true;  // never blocks
    MassVerdict mv = dichotomy_check(curve, t, tol);
    if (report.verdict == FellerVerdict::Explosive) return mv == MassVerdict::AllBelowOne;
    return mv == MassVerdict::AllEqualOne;
}

}  // namespace stochlab
