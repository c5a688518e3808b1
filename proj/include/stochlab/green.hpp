#pragma once

#include "stochlab/semigroup.hpp"

#include <optional>

namespace stochlab {

enum class GreenRoute { TimeIntegrated, ClosedForm };
enum class Criticality { Subcritical, Critical, Inconclusive };

struct GreenTable {
    Grid1D grid;
    int y_index = 0;
    std::vector<double> values;  ///< full grid; empty when verdict == Critical and minimal
    GreenRoute route = GreenRoute::ClosedForm;
    bool truncated_at_R = true;
    double t_max = 0.0;
    double tail_slope = 0.0;     ///< fitted d/dT of the running time integral at T_max
    double tail_exponent = 0.0;  ///< fitted log-log slope of the integrand
    Criticality verdict = Criticality::Subcritical;
};

/// Closed-form Green machinery for symmetric-compatible specs, built on the
/// scale integrals of 1/(a v). Everything runs in log space so densities like
/// exp(r^3) stay representable.
class SymmetricGreenKernel {
public:
    /// nullopt when the spec is not symmetric-compatible.
    static std::optional<SymmetricGreenKernel> build(const OperatorSpec& spec);

    bool subcritical() const { return subcritical_; }
    bool reflecting() const { return reflecting_; }

    /// log of Psi(r) = int_r^inf 1/(a v); -inf-safe, +inf marker when divergent.
    double log_psi(double r) const;
    double psi(double r) const;

    /// Minimal (untruncated) Green function; requires subcritical().
    double minimal(double x, double y) const;

    /// Green function of the Dirichlet truncation at R (left end per spec).
    double truncated(double x, double y, double R) const;

    /// Backward cumulative log int_{r_i}^{R} 1/(a v) over grid nodes.
    std::vector<double> log_psi_to_R(const Grid1D& grid) const;
    /// Forward cumulative log int_{lo}^{r_i} 1/(a v) over grid nodes.
    std::vector<double> log_phi_from_lo(const Grid1D& grid) const;

    const OperatorSpec& spec() const { return spec_; }

private:
    explicit SymmetricGreenKernel(OperatorSpec spec);
    double log_weight(double t) const;  ///< -log a - log v
    double log_phi_minimal(double r) const;  ///< left integral for line specs

    OperatorSpec spec_;
    bool reflecting_ = true;
    bool subcritical_ = true;
    double log_psi_div_marker_ = kInf;
};

/// Trapezoid-in-time integration of the kernel column up to t_max, with a
/// fitted power tail and the criticality verdict from the residual slope.
GreenTable green_via_time(const OperatorSpec& spec, const Grid1D& grid, int y_index,
                          double t_max, double dt);

/// Truncated-at-R closed-form table (exists for every truncation).
GreenTable green_closed_form(const OperatorSpec& spec, const Grid1D& grid, int y_index);

/// Minimal closed-form table; empty values + Critical verdict when the scale
/// integral diverges.
GreenTable green_closed_form_minimal(const OperatorSpec& spec, const Grid1D& grid, int y_index);

struct GreenPotential {
    Grid1D grid;
    std::vector<double> mu;      ///< density samples
    std::vector<double> values;  ///< G_mu on the full grid (untruncated object)
    bool finite = true;
    std::string note;
};

/// G_mu(x) = sum_j G(x,y_j) mu(y_j) v(y_j) h / rho(y_j) plus the tail beyond R.
GreenPotential green_potential(const OperatorSpec& spec, const Grid1D& grid, const RealFn& mu);

struct Comparability {
    double c_low = 0.0;
    double c_high = 0.0;
};

/// min/max of G_mu(x)/G(x,o) over |x-o| > epsilon, x below the 0.9R cutoff.
Comparability comparability(const GreenPotential& gmu, const GreenTable& g, double epsilon);

enum class L1Verdict { Liouville, NotLiouville, Inconclusive };

struct L1Report {
    L1Verdict verdict = L1Verdict::Inconclusive;
    std::vector<double> R;
    std::vector<double> I;       ///< I(R) = int G(x,y) v dx over the truncation
    double loglog_slope = 0.0;
    double last_increment = 0.0;
};

L1Report l1_liouville_verdict(const OperatorSpec& spec, const Grid1D& grid, int y_index,
                              std::span<const double> schedule);

const char* to_string(Criticality c);
const char* to_string(L1Verdict v);

}  // namespace stochlab
