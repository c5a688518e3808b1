#pragma once

#include "stochlab/diagnostics.hpp"
#include "stochlab/skew.hpp"

#include <ostream>

namespace stochlab::csv {

std::string fmt(double x);

/// Fixed verdict-row schema:
/// label,criticality,completeness,mass_defect,feller_verdict,agree,
/// l1_liouville,l1_growth_slope,h,dt,R_max,runtime_s
void write_verdict_header(std::ostream& os, const std::string& tool_line);
void write_verdict_row(std::ostream& os, const DiagnosticsReport& rep);

/// Per-row convergence evidence, emitted as a comment line so the fixed
/// schema stays intact while every verdict still carries its deltas.
void write_evidence_comment(std::ostream& os, const DiagnosticsReport& rep);

void write_series(std::ostream& os, const std::string& header,
                  const std::vector<std::vector<double>>& columns);

void write_product_table(std::ostream& os, const ProductDiagnostics& pd);

}  // namespace stochlab::csv
