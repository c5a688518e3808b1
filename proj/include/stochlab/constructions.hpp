#pragma once

#include "stochlab/green.hpp"

namespace stochlab {

enum class RhoKind { InverseMeasure, HardyRoute };

/// A multiplier produced by one of the two rescaling recipes, evaluable at any
/// radius (the Feller oracle samples far beyond the grid).
struct RhoRecipe {
    RhoKind kind = RhoKind::InverseMeasure;
    RealFn rho;
    std::vector<double> rho_samples;  ///< at the construction grid's nodes
    std::string rho_label;

    // provenance
    RealFn mu;                  ///< inverse_measure: the density used
    std::string mu_label;
    Comparability comparability{};  ///< constants from the finite-potential gate
    GreenPotential gmu;         ///< the potential backing the recipe
    double K_edge = 0.0;        ///< hardy_route: edge of the far-field formula
    double blend_lo = 0.0, blend_c0 = 0.0;  ///< hardy_route: inner C1 blend record
};

/// Theorem-style recipe rho = 1/mu. Requires a finite Green potential and the
/// far-field decay gate G(0.9R, o) < 5% of G(o+1, o), decreasing under
/// R-doubling.
RhoRecipe rho_from_measure(const OperatorSpec& spec, const Grid1D& grid, const RealFn& mu,
                           const std::string& mu_label = "mu");

/// u = -G_mu together with the residual of (-P_rho) u  (should be ~ 1).
struct WitnessFunction {
    std::vector<double> u;         ///< full grid
    std::vector<double> residual;  ///< (-P_rho) u at active nodes (full grid layout)
    double sup_value = 0.0;        ///< sup of u over the probe window
    int window_lo = 0, window_hi = 0;
};

WitnessFunction witness(const OperatorSpec& spec, const Grid1D& grid, const RhoRecipe& recipe);

struct OmoriYauLevel {
    double level = 0.0;   ///< 1/n
    int node = -1;        ///< argmin of (-P)u over the level set
    double min_minus_Pu = 0.0;
    int set_size = 0;
};

struct OmoriYauScan {
    std::vector<OmoriYauLevel> levels;
    bool incompleteness_flagged = false;  ///< minima stayed >= margin at every level
    double margin = 0.05;
};

/// Scans the near-sup sets Omega_{1/n} over the probe window and records the
/// minimum of (-P)u there; a uniformly positive floor violates the
/// Omori-Yau-type principle and certifies incompleteness.
OmoriYauScan omori_yau_scan(const OperatorSpec& spec, const Grid1D& grid,
                            std::span<const double> u_full, int n_levels);

enum class CertificateVerdict { IncompleteCertified, NoCertificate, Inconclusive };

struct EigenCertificate {
    std::vector<double> w;  ///< w = 1 - lambda v on the full grid
    double min_w = 0.0, max_w = 0.0;  ///< over the probe window
    CertificateVerdict verdict = CertificateVerdict::Inconclusive;
};

/// w = 1 - lambda * int_0^inf e^{-lambda t} m(.,t) dt by quadrature of the
/// mass curve; a positive bounded w solves (P + lambda) w = 0.
EigenCertificate bounded_eigen_certificate(const OperatorSpec& spec, const Grid1D& grid,
                                           double lambda, double dt, double t_max = 20.0);

struct HardyWeight {
    std::vector<double> W;      ///< operator route: P(sqrt G_phi) / sqrt G_phi
    std::vector<double> W_ff;   ///< far-field formula a (G')^2 / (4 G^2); 0 inside supp
    double support_cutoff = 0.0;
    GreenPotential gphi;
    double c_mass = 0.0;        ///< int phi v: far-field G_phi = c_mass * psi(r)
    RealFn W_ff_fn;             ///< far-field weight as a function of r
    RealFn gphi_ff_fn;          ///< far-field potential as a function of r
};

/// Optimal-Hardy construction from a compactly supported density phi.
HardyWeight hardy_weight(const OperatorSpec& spec, const Grid1D& grid, const RealFn& phi,
                         double K_edge);

/// rho = (W sqrt(G_phi))^{-1} outside K, blended C1-monotone to a constant
/// inside. Requires W > 0 beyond K_edge.
RhoRecipe rho_from_hardy(const HardyWeight& hw, const Grid1D& grid, double K_edge);

struct CriticalHardy {
    std::vector<double> W_mu;     ///< mu / G_mu
    std::vector<double> residual; ///< (P - W_mu) G_mu at active nodes
    GreenPotential gmu;
};

CriticalHardy critical_hardy_from_measure(const OperatorSpec& spec, const Grid1D& grid,
                                          const RealFn& mu);

/// C2 bump supported on [lo, hi]: (1-s^2)^3 with s the affine map to [-1,1].
RealFn bump_density(double lo, double hi);

}  // namespace stochlab
