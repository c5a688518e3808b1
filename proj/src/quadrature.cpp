#include "stochlab/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace stochlab::quad {

namespace {

double simpson_rec(const RealFn& f, double a, double b, double fa, double fm, double fb,
                   double whole, double eps, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

}  // namespace

double adaptive(const RealFn& f, double a, double b, double rel_tol, int max_depth) {
    if (a == b) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    double scale = std::max(std::fabs(whole), 1e-300);
    return simpson_rec(f, a, b, fa, fm, fb, whole, rel_tol * scale, max_depth);
}

TailResult integrate_tail(const RealFn& f, double a, double rel_tol) {
    TailResult out;
    double width = std::max(1.0, std::fabs(a));
    double lo = a, total = 0.0;
    std::vector<double> panel_mass, panel_mid;
    int quiet = 0;
    const int max_panels = 60;
    for (int k = 0; k < max_panels; ++k) {
        double hi = lo + width;
        double p = adaptive(f, lo, hi, std::min(1e-9, rel_tol));
        total += p;
        panel_mass.push_back(p);
        panel_mid.push_back(0.5 * (lo + hi));
        if (total > 0.0 && p <= rel_tol * total) {
            if (++quiet >= 2) break;
        } else {
            quiet = 0;
        }
        lo = hi;
        width *= 2.0;
    }
    // classify from the last few panel masses: mass over [x,2x] for f ~ x^p scales like x^{p+1}
    std::size_t m = panel_mass.size();
    if (quiet >= 2) {
        out.cls = TailClass::Converged;
        out.value = total;
        return out;
    }
    if (m >= 4) {
        double q = std::log(std::max(panel_mass[m - 1], 1e-300) /
                            std::max(panel_mass[m - 4], 1e-300)) /
                   std::log(panel_mid[m - 1] / panel_mid[m - 4]);
        out.loglog_slope = q - 1.0;  // back to integrand slope
        if (q <= -0.3) {
            double ratio = std::pow(2.0, q);
            out.value = total + panel_mass[m - 1] * ratio / (1.0 - ratio);
            out.cls = TailClass::Converged;
            return out;
        }
        out.value = total;
        out.cls = (q >= -0.05) ? TailClass::Diverged : TailClass::Inconclusive;
        return out;
    }
    out.value = total;
    out.cls = TailClass::Diverged;
    return out;
}

namespace {

/// log of \int_lo^hi e^{w} by Simpson anchored at the panel max.
double log_panel(const RealFn& w, double lo, double hi) {
    const int n = 16;  // composite Simpson, n even
    double h = (hi - lo) / n;
    double anchor = -kInf;
    double wv[n + 1];
    for (int i = 0; i <= n; ++i) {
        wv[i] = w(lo + i * h);
        anchor = std::max(anchor, wv[i]);
    }
    if (anchor == -kInf) return -kInf;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
        double coef = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        s += coef * std::exp(wv[i] - anchor);
    }
    return anchor + std::log(s * h / 3.0);
}

LogTailResult log_tail_impl(const RealFn& w, double a, double rel_tol, bool leftward) {
    LogTailResult out;
    double width = std::max(1.0, std::fabs(a));
    double edge = a;
    double log_total = -kInf;
    std::vector<double> lp, mid;
    int quiet = 0;
    const int max_panels = 60;
    const double log_tol = std::log(rel_tol);
    for (int k = 0; k < max_panels; ++k) {
        double lo = leftward ? edge - width : edge;
        double hi = leftward ? edge : edge + width;
        double p = log_panel(w, lo, hi);
        log_total = logaddexp(log_total, p);
        lp.push_back(p);
        mid.push_back(0.5 * (lo + hi));
        if (log_total > -kInf && p <= log_total + log_tol) {
            if (++quiet >= 2) break;
        } else {
            quiet = 0;
        }
        edge = leftward ? lo : hi;
        width *= 2.0;
    }
    std::size_t m = lp.size();
    if (quiet >= 2) {
        out.cls = TailClass::Converged;
        out.log_value = log_total;
        return out;
    }
    if (m >= 4) {
        double q = (lp[m - 1] - lp[m - 4]) /
                   std::log(std::fabs(mid[m - 1]) / std::max(std::fabs(mid[m - 4]), 1e-300));
        out.loglog_slope = q - 1.0;
        if (q <= -0.3) {
            double ratio = std::pow(2.0, q);
            out.log_value = logaddexp(log_total, lp[m - 1] + std::log(ratio / (1.0 - ratio)));
            out.cls = TailClass::Converged;
            return out;
        }
        out.log_value = log_total;
        out.cls = (q >= -0.05) ? TailClass::Diverged : TailClass::Inconclusive;
        return out;
    }
    out.log_value = log_total;
    out.cls = TailClass::Diverged;
    return out;
}

}  // namespace

LogTailResult log_integrate_tail(const RealFn& w, double a, double rel_tol) {
    return log_tail_impl(w, a, rel_tol, false);
}

LogTailResult log_integrate_tail_left(const RealFn& w, double a, double rel_tol) {
    return log_tail_impl(w, a, rel_tol, true);
}

}  // namespace stochlab::quad
