#include "stochlab/constructions.hpp"

#include <memory>

#include "stochlab/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace stochlab {

RealFn bump_density(double lo, double hi) {
    if (!(hi > lo)) throw PreconditionError("bump_density: need hi > lo");
    return [lo, hi](double r) {
        double s = (2.0 * r - (lo + hi)) / (hi - lo);
        if (s <= -1.0 || s >= 1.0) return 0.0;
        double q = 1.0 - s * s;
        return q * q * q;
    };
}

RhoRecipe rho_from_measure(const OperatorSpec& spec, const Grid1D& grid, const RealFn& mu,
                           const std::string& mu_label) {
    RhoRecipe rec;
    rec.kind = RhoKind::InverseMeasure;
    rec.mu = mu;
    rec.mu_label = mu_label;

    rec.gmu = green_potential(spec, grid, mu);
    if (!rec.gmu.finite)
        throw NumericalError("rho_from_measure",
                             "Green potential of " + mu_label + " is not finite");

    // far-field decay gate on the minimal Green function at o ~ r_min + 1
    auto kern = SymmetricGreenKernel::build(spec);
    if (!kern || !kern->subcritical())
        throw NumericalError("rho_from_measure", "spec is critical or has no closed-form gate");
    double o = spec.coeffs.r_min + 1.0;
    double probe = o + 1.0;
    double g_probe = kern->minimal(probe, o);
    double g_far = kern->minimal(grid.r_min + 0.9 * (grid.R - grid.r_min), o);
    double g_far2 = kern->minimal(grid.r_min + 0.9 * (2.0 * grid.R - grid.r_min), o);
    if (!(g_far < 0.05 * g_probe) || !(g_far2 < g_far))
        throw NumericalError("rho_from_measure",
                             "Green decay gate failed: G(0.9R,o)/G(o+1,o) = " +
                                 std::to_string(g_far / g_probe));

    GreenTable gmin = green_closed_form_minimal(spec, grid, grid.index_of(o));
    rec.comparability = comparability(rec.gmu, gmin, 1.0);

    rec.rho = [mu](double r) {
        double m = mu(r);
        if (!(m > 0.0))
            throw NumericalError("rho_from_measure", "mu must be positive to invert");
        return 1.0 / m;
    };
    rec.rho_label = "1/" + mu_label;
    rec.rho_samples.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) rec.rho_samples[i] = rec.rho(grid.nodes[i]);
    return rec;
}

WitnessFunction witness(const OperatorSpec& spec, const Grid1D& grid, const RhoRecipe& recipe) {
    if (recipe.kind != RhoKind::InverseMeasure)
        throw PreconditionError("witness: recipe must be inverse_measure");
    WitnessFunction w;
    w.u.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) w.u[i] = -recipe.gmu.values[i];

    OperatorSpec rescaled = rescale(spec, recipe.rho, recipe.rho_label);
    DiscreteOperator op = assemble(rescaled, grid);
    std::vector<double> pu = op.apply(w.u);
    w.residual.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) w.residual[i] = -pu[i];

    std::tie(w.window_lo, w.window_hi) = probe_window(op);
    w.sup_value = -kInf;
    for (int i = w.window_lo; i <= w.window_hi; ++i)
        w.sup_value = std::max(w.sup_value, w.u[static_cast<std::size_t>(i)]);
    return w;
}

OmoriYauScan omori_yau_scan(const OperatorSpec& spec, const Grid1D& grid,
                            std::span<const double> u_full, int n_levels) {
    if (n_levels < 1) throw PreconditionError("omori_yau_scan: n_levels must be >= 1");
    DiscreteOperator op = assemble(spec, grid);
    auto [lo, hi] = probe_window(op);
    std::vector<double> pu = op.apply(u_full);

    double usup = -kInf;
    for (int i = lo; i <= hi; ++i) usup = std::max(usup, u_full[static_cast<std::size_t>(i)]);
    if (!std::isfinite(usup)) throw PreconditionError("omori_yau_scan: u unbounded on the window");

    OmoriYauScan scan;
    double floor = kInf;
    for (int n = 1; n <= n_levels; ++n) {
        OmoriYauLevel lev;
        lev.level = 1.0 / n;
        lev.min_minus_Pu = kInf;
        for (int i = lo; i <= hi; ++i) {
            std::size_t k = static_cast<std::size_t>(i);
            if (u_full[k] > usup - lev.level) {
                ++lev.set_size;
                double val = -pu[k];
                if (val < lev.min_minus_Pu) {
                    lev.min_minus_Pu = val;
                    lev.node = i;
                }
            }
        }
        if (lev.set_size == 0) break;  // level set empty on the truncated grid
        floor = std::min(floor, lev.min_minus_Pu);
        scan.levels.push_back(lev);
    }
    scan.incompleteness_flagged =
        !scan.levels.empty() && scan.levels.size() == static_cast<std::size_t>(n_levels) &&
        floor >= scan.margin;
    return scan;
}

EigenCertificate bounded_eigen_certificate(const OperatorSpec& spec, const Grid1D& grid,
                                           double lambda, double dt, double t_max) {
    if (!(lambda > 0.0)) throw PreconditionError("bounded_eigen_certificate: lambda must be > 0");
    DiscreteOperator op = assemble(spec, grid);
    const std::size_t n = op.active_count();
    const std::size_t off = static_cast<std::size_t>(op.i_lo);

    std::vector<double> u(n, 1.0), vint(n, 0.0);
    TridiagFactor fac(op, dt);
    long steps = std::lround(t_max / dt);
    double t = 0.0;
    std::vector<double> weighted(n, 1.0);  // e^{-lambda t} m at t = 0
    for (long s = 0; s < steps; ++s) {
        for (std::size_t k = 0; k < n; ++k) vint[k] += 0.5 * dt * weighted[k];
        fac.solve(u);
        t += dt;
        double damp = std::exp(-lambda * t);
        for (std::size_t k = 0; k < n; ++k) {
            weighted[k] = damp * u[k];
            vint[k] += 0.5 * dt * weighted[k];
        }
    }
    // analytic tail bound: m nonincreasing, so the remainder is ~ m(T) e^{-lambda T}/lambda
    for (std::size_t k = 0; k < n; ++k) vint[k] += weighted[k] / lambda;

    EigenCertificate cert;
    cert.w.assign(grid.size(), 1.0);
    if (op.i_lo == 1) cert.w[0] = 1.0;
    for (std::size_t k = 0; k < n; ++k) cert.w[off + k] = 1.0 - lambda * vint[k];
    auto [lo, hi] = probe_window(op);
    cert.min_w = kInf;
    cert.max_w = -kInf;
    for (int i = lo; i <= hi; ++i) {
        cert.min_w = std::min(cert.min_w, cert.w[static_cast<std::size_t>(i)]);
        cert.max_w = std::max(cert.max_w, cert.w[static_cast<std::size_t>(i)]);
    }
    if (cert.min_w >= 0.01) cert.verdict = CertificateVerdict::IncompleteCertified;
    else if (cert.max_w <= 5e-3) cert.verdict = CertificateVerdict::NoCertificate;
    else cert.verdict = CertificateVerdict::Inconclusive;
    return cert;
}

HardyWeight hardy_weight(const OperatorSpec& spec, const Grid1D& grid, const RealFn& phi,
                         double K_edge) {
    if (!(K_edge > grid.r_min)) throw PreconditionError("hardy_weight: K_edge inside the domain");
    for (double r = K_edge + 1e-9; r < grid.R; r += 0.37 * (grid.R - K_edge))
        if (phi(r) != 0.0)
            throw PreconditionError("hardy_weight: phi must be supported in [r_min, K_edge]");

    auto kern = SymmetricGreenKernel::build(spec);
    if (!kern || !kern->subcritical() || !kern->reflecting())
        throw PreconditionError("hardy_weight: need a subcritical symmetric half-line spec");

    HardyWeight hw;
    hw.support_cutoff = K_edge;
    hw.gphi = green_potential(spec, grid, phi);
    if (!hw.gphi.finite) throw NumericalError("hardy_weight", "G_phi not finite");

    const std::size_t n = grid.size();
    std::vector<double> sqrt_g(n);
    for (std::size_t i = 0; i < n; ++i) sqrt_g[i] = std::sqrt(std::max(hw.gphi.values[i], 0.0));

    DiscreteOperator op = assemble(spec, grid);
    std::vector<double> psg = op.apply(sqrt_g);
    hw.W.assign(n, 0.0);
    for (int i = op.i_lo; i <= op.i_hi; ++i) {
        std::size_t k = static_cast<std::size_t>(i);
        if (hw.gphi.values[k] > 1e-12) hw.W[k] = psg[k] / sqrt_g[k];
    }

    // far-field formula a (G')^2 / (4 G^2) via centered differences of log G
    hw.W_ff.assign(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (grid.nodes[i] <= K_edge) continue;
        if (hw.gphi.values[i - 1] <= 1e-12 || hw.gphi.values[i + 1] <= 1e-12) continue;
        double dlog =
            (std::log(hw.gphi.values[i + 1]) - std::log(hw.gphi.values[i - 1])) / (2.0 * grid.h);
        hw.W_ff[i] = spec.coeffs.a(grid.nodes[i]) * dlog * dlog / 4.0;
    }

    // beyond supp phi the potential is exactly c_mass * psi(r); expose the
    // functional forms for evaluation off the grid
    double c_mass = 0.0;
    for (std::size_t i = 0; i < n && grid.nodes[i] <= K_edge + grid.h; ++i) {
        double w = (i == 0) ? 0.5 : 1.0;
        c_mass += w * phi(grid.nodes[i]) * std::exp(spec.coeffs.log_v(grid.nodes[i])) * grid.h;
    }
    hw.c_mass = c_mass;
    auto kern_sh = std::make_shared<SymmetricGreenKernel>(*kern);
    const auto coeffs = spec.coeffs;
    hw.gphi_ff_fn = [kern_sh, c_mass](double r) { return c_mass * kern_sh->psi(r); };
    hw.W_ff_fn = [kern_sh, coeffs](double r) {
        // (psi'/psi)^2 a/4 with psi' = -1/(a v)
        double lpsi = kern_sh->log_psi(r);
        double la = std::log(coeffs.a(r));
        return std::exp(-std::log(4.0) - la - 2.0 * coeffs.log_v(r) - 2.0 * lpsi);
    };
    return hw;
}

RhoRecipe rho_from_hardy(const HardyWeight& hw, const Grid1D& grid, double K_edge) {
    // hypothesis gate: W > 0 at every reported node beyond K_edge (up to 0.9R)
    double cutoff = grid.r_min + 0.9 * (grid.R - grid.r_min);
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        double r = grid.nodes[i];
        if (r <= K_edge || r > cutoff) continue;
        if (!(hw.W[i] > 0.0))
            throw NumericalError("rho_from_hardy",
                                 "W <= 0 at r = " + std::to_string(r) +
                                     "; the positivity hypothesis fails");
    }

    RhoRecipe rec;
    rec.kind = RhoKind::HardyRoute;
    rec.K_edge = K_edge;
    rec.gmu = hw.gphi;

    auto w_fn = hw.W_ff_fn;
    auto g_fn = hw.gphi_ff_fn;
    auto rho_ff = [w_fn, g_fn](double r) { return 1.0 / (w_fn(r) * std::sqrt(g_fn(r))); };

    // C1 monotone Hermite blend to a constant inside K
    double rho_K = rho_ff(K_edge);
    double slope_K = deriv5(rho_ff, K_edge, 1e-4 * std::max(1.0, K_edge));
    double width = 0.5 * (K_edge - grid.r_min);
    if (std::fabs(slope_K) > 1e-12) width = std::min(width, rho_K / std::fabs(slope_K));
    double c0 = rho_K - 0.5 * slope_K * width;
    if (!(c0 > 0.0)) c0 = 0.5 * rho_K;
    double lo = K_edge - width;
    rec.blend_lo = lo;
    rec.blend_c0 = c0;

    rec.rho = [rho_ff, rho_K, slope_K, c0, lo, K_edge](double r) {
        if (r >= K_edge) return rho_ff(r);
        if (r <= lo) return c0;
        double t = (r - lo) / (K_edge - lo);
        double h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
        double h10 = t * (1.0 - t) * (1.0 - t);
        double h01 = t * t * (3.0 - 2.0 * t);
        double h11 = t * t * (t - 1.0);
        return h00 * c0 + h01 * rho_K + (K_edge - lo) * (h10 * 0.0 + h11 * slope_K);
    };
    rec.rho_label = "hardy_rho";
    rec.rho_samples.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) rec.rho_samples[i] = rec.rho(grid.nodes[i]);
    return rec;
}

CriticalHardy critical_hardy_from_measure(const OperatorSpec& spec, const Grid1D& grid,
                                          const RealFn& mu) {
    CriticalHardy ch;
    ch.gmu = green_potential(spec, grid, mu);
    if (!ch.gmu.finite) throw NumericalError("critical_hardy", "G_mu not finite");
    const std::size_t n = grid.size();
    ch.W_mu.resize(n);
    for (std::size_t i = 0; i < n; ++i) ch.W_mu[i] = ch.gmu.mu[i] / ch.gmu.values[i];

    DiscreteOperator op = assemble(spec, grid);
    std::vector<double> pg = op.apply(ch.gmu.values);
    ch.residual.assign(n, 0.0);
    for (int i = op.i_lo; i <= op.i_hi; ++i) {
        std::size_t k = static_cast<std::size_t>(i);
        ch.residual[k] = pg[k] - ch.W_mu[k] * ch.gmu.values[k];
    }
    return ch;
}

}  // namespace stochlab
