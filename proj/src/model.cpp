#include "stochlab/model.hpp"

#include <cmath>
#include <cstdio>

namespace stochlab {

namespace {

std::string fmt_param(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

/// log(sinh r) without overflow for large r.
double log_sinh(double r) {
    if (r > 20.0) return r - std::log(2.0) + std::log1p(-std::exp(-2.0 * r));
    return std::log(std::sinh(r));
}

/// rapid_model exponent q(r) = r^alpha smoothly flattened on [0,1]:
/// q = r^alpha * s3(r) with the C^2 smoothstep s3(x) = x^3 (10 - 15x + 6x^2).
double rapid_q(double r, double alpha) {
    if (r >= 1.0) return std::pow(r, alpha);
    if (r <= 0.0) return 0.0;
    double s3 = r * r * r * (10.0 - 15.0 * r + 6.0 * r * r);
    return std::pow(r, alpha) * s3;
}

double rapid_qprime(double r, double alpha) {
    if (r >= 1.0) return alpha * std::pow(r, alpha - 1.0);
    if (r <= 0.0) return 0.0;
    double s3 = r * r * r * (10.0 - 15.0 * r + 6.0 * r * r);
    double s3p = r * r * (30.0 - 60.0 * r + 30.0 * r * r);
    return alpha * std::pow(r, alpha - 1.0) * s3 + std::pow(r, alpha) * s3p;
}

}  // namespace

OperatorSpec preset(const std::string& name, const std::vector<double>& params) {
    OperatorSpec spec;
    spec.rho = [](double) { return 1.0; };
    spec.unit_rho = true;

    auto need = [&](std::size_t k) {
        if (params.size() != k)
            throw PreconditionError("preset " + name + ": expected " + std::to_string(k) +
                                    " parameter(s), got " + std::to_string(params.size()));
    };

    if (name == "euclidean_radial") {
        need(1);
        double nd = params[0];
        int n = static_cast<int>(std::lround(nd));
        if (n < 3 || std::fabs(nd - n) > 1e-12)
            throw PreconditionError("euclidean_radial: n must be an integer >= 3");
        double m = n - 1.0;
        spec.coeffs.a = [](double) { return 1.0; };
        spec.coeffs.b = [m](double r) { return -m / r; };
        spec.coeffs.v = [m](double r) { return std::pow(r, m); };
        spec.coeffs.log_v = [m](double r) { return m * std::log(r); };
        spec.coeffs.r_min = 0.0;
        spec.coeffs.left = LeftBoundary::RegularReflecting;
        spec.coeffs.pole_drift_limit = -m;
        spec.label = "euclidean_radial(" + std::to_string(n) + ")";
        return spec;
    }
    if (name == "hyperbolic_radial") {
        need(1);
        double nd = params[0];
        int n = static_cast<int>(std::lround(nd));
        if (n < 2 || std::fabs(nd - n) > 1e-12)
            throw PreconditionError("hyperbolic_radial: n must be an integer >= 2");
        double m = n - 1.0;
        spec.coeffs.a = [](double) { return 1.0; };
        spec.coeffs.b = [m](double r) { return -m / std::tanh(r); };
        spec.coeffs.v = [m](double r) { return std::pow(std::sinh(r), m); };
        spec.coeffs.log_v = [m](double r) { return m * log_sinh(r); };
        spec.coeffs.r_min = 0.0;
        spec.coeffs.left = LeftBoundary::RegularReflecting;
        spec.coeffs.pole_drift_limit = -m;
        spec.label = "hyperbolic_radial(" + std::to_string(n) + ")";
        return spec;
    }
    if (name == "rapid_model") {
        need(1);
        double alpha = params[0];
        if (!(alpha > 0.0)) throw PreconditionError("rapid_model: alpha must be > 0");
        spec.coeffs.a = [](double) { return 1.0; };
        spec.coeffs.b = [alpha](double r) { return -rapid_qprime(r, alpha); };
        spec.coeffs.v = [alpha](double r) { return std::exp(rapid_q(r, alpha)); };
        spec.coeffs.log_v = [alpha](double r) { return rapid_q(r, alpha); };
        spec.coeffs.r_min = 0.0;
        spec.coeffs.left = LeftBoundary::RegularReflecting;
        spec.coeffs.pole_drift_limit = 0.0;
        spec.label = "rapid_model(" + fmt_param(alpha) + ")";
        return spec;
    }
    if (name == "drifted_line") {
        need(1);
        double beta = params[0];
        spec.coeffs.a = [](double) { return 1.0; };
        spec.coeffs.b = [beta](double) { return beta; };
        spec.coeffs.v = [beta](double r) { return std::exp(-beta * r); };
        spec.coeffs.log_v = [beta](double r) { return -beta * r; };
        spec.coeffs.r_min = 0.0;
        spec.coeffs.left = LeftBoundary::EntireLine;
        spec.coeffs.pole_drift_limit = 0.0;
        spec.label = "drifted_line(" + fmt_param(beta) + ")";
        return spec;
    }
    throw PreconditionError("unknown preset '" + name + "'");
}

OperatorSpec rescale(const OperatorSpec& spec, const RealFn& rho, const std::string& rho_label) {
    OperatorSpec out = spec;
    RealFn base = spec.rho;
    out.rho = [base, rho](double r) {
        double v = rho(r);
        if (!(v > 0.0))
            throw PreconditionError("rescale: rho must be strictly positive (rho(" +
                                    std::to_string(r) + ") = " + std::to_string(v) + ")");
        return base(r) * v;
    };
    out.unit_rho = false;
    out.label = "rescale(" + spec.label + ", " + rho_label + ")";
    return out;
}

bool symmetric_compatible(const OperatorSpec& spec, double tol) {
    const auto& c = spec.coeffs;
    std::vector<double> probes;
    const double base[] = {0.31, 0.73, 1.17, 1.93, 3.1, 5.2, 7.9};
    for (double p : base) probes.push_back(c.r_min + p);
    if (c.left == LeftBoundary::EntireLine)
        for (double p : base) probes.push_back(c.r_min - p);

    double rho0 = spec.rho(probes.front());
    for (double r : probes) {
        double h = 1e-3 * std::max(1.0, std::fabs(r));
        double ap = deriv5(c.a, r, h);
        double dlv = deriv5(c.log_v, r, h);
        double residual = c.b(r) + ap + c.a(r) * dlv;
        double scale = std::max({1.0, std::fabs(c.b(r)), std::fabs(ap), std::fabs(c.a(r) * dlv)});
        if (std::fabs(residual) > tol * scale) return false;
        if (!spec.unit_rho && relative_diff(spec.rho(r), rho0) > tol) return false;
    }
    return true;
}

}  // namespace stochlab
