#pragma once

#include "stochlab/constructions.hpp"
#include "stochlab/feller.hpp"
#include "stochlab/green.hpp"

namespace stochlab {

enum class CompletenessVerdict { Complete, Incomplete, Inconclusive };

struct Budget {
    std::vector<double> R_schedule{10.0, 20.0, 40.0};
    double h = 0.02;
    double dt = 1e-3;
    double t_max = 200.0;   ///< time-route horizon for criticality
    double mass_t = 1.0;    ///< evaluation time for the mass verdict
    double mass_tol = 5e-3; ///< dichotomy tolerance
    double feller_r_quad = 1e6;
};

struct ConvergenceEvidence {
    std::vector<double> R;
    std::vector<double> mass_defect;   ///< 1 - max probe mass, per R
    double mass_r_delta = 0.0;         ///< change across the last R-doubling
    double l1_last_increment = 0.0;
    double h = 0.0, dt = 0.0;
};

struct DiagnosticsReport {
    std::string label;
    Criticality criticality = Criticality::Inconclusive;
    double tail_slope = 0.0;
    CompletenessVerdict completeness = CompletenessVerdict::Inconclusive;
    double mass_defect = 0.0;
    MassVerdict mass_verdict = MassVerdict::Violated;
    FellerReport feller;
    bool agree = false;
    L1Report l1;
    bool symmetric = false;
    ConvergenceEvidence evidence;
    bool consistent = true;            ///< report invariants held
    std::vector<std::string> notes;
    double runtime_s = 0.0;
};

/// Full verdict pipeline: criticality (time route), completeness (mass
/// dichotomy + Feller oracle + agreement), L1-Liouville (exhaustion growth).
DiagnosticsReport diagnose(const OperatorSpec& spec, const Budget& budget);

struct Theorem24Case {
    std::string mu_label;
    bool admissible = false;
    std::string skip_reason;
    bool claim1_incomplete = false;    ///< rescaled spec incomplete + oracle agrees
    bool claim2_l1_invariant = false;  ///< L1 verdict preserved under the rescale
    double witness_residual_dev = 0.0; ///< max |residual - 1| on the interior window
    double oy_min_floor = 0.0;         ///< min over levels of the scan minima
    bool oy_flagged = false;
    DiagnosticsReport base;
    DiagnosticsReport rescaled;
};

struct Theorem24Summary {
    std::vector<Theorem24Case> cases;
    bool all_passed = false;
};

/// Runs the inverse-measure recipe over a mu test set, asserting both claims
/// of the rescaling theorem plus the witness/Omori-Yau evidence.
Theorem24Summary theorem24_suite(const OperatorSpec& spec,
                                 const std::vector<std::pair<RealFn, std::string>>& mu_set,
                                 const Budget& budget);

struct CatalogEntry {
    OperatorSpec spec;
    bool expect_complete = true;  ///< documentation of the analytic expectation
};

/// The default cross-validation catalog: base presets plus rescaled variants
/// (including one Hardy-route recipe).
std::vector<CatalogEntry> default_catalog(const Budget& budget);

const char* to_string(CompletenessVerdict v);

}  // namespace stochlab
