#include "stochlab/csv.hpp"

#include <cstdio>

namespace stochlab::csv {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

void write_verdict_header(std::ostream& os, const std::string& tool_line) {
    os << "# " << tool_line << "\n";
    os << "label,criticality,completeness,mass_defect,feller_verdict,agree,l1_liouville,"
          "l1_growth_slope,h,dt,R_max,runtime_s\n";
}

void write_verdict_row(std::ostream& os, const DiagnosticsReport& rep) {
    os << rep.label << ',' << to_string(rep.criticality) << ',' << to_string(rep.completeness)
       << ',' << fmt(rep.mass_defect) << ',' << to_string(rep.feller.verdict) << ','
       << (rep.agree ? "true" : "false") << ',' << to_string(rep.l1.verdict) << ','
       << fmt(rep.l1.loglog_slope) << ',' << fmt(rep.evidence.h) << ',' << fmt(rep.evidence.dt)
       << ',' << fmt(rep.evidence.R.empty() ? 0.0 : rep.evidence.R.back()) << ','
       << fmt(rep.runtime_s) << "\n";
}

void write_evidence_comment(std::ostream& os, const DiagnosticsReport& rep) {
    os << "# evidence " << rep.label << ": mass_r_delta=" << fmt(rep.evidence.mass_r_delta)
       << " l1_last_increment=" << fmt(rep.evidence.l1_last_increment) << " defects=[";
    for (std::size_t i = 0; i < rep.evidence.mass_defect.size(); ++i)
        os << (i ? " " : "") << fmt(rep.evidence.mass_defect[i]);
    os << "] consistent=" << (rep.consistent ? "true" : "false") << "\n";
}

void write_series(std::ostream& os, const std::string& header,
                  const std::vector<std::vector<double>>& columns) {
    os << header << "\n";
    if (columns.empty()) return;
    std::size_t rows = columns.front().size();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c)
            os << (c ? "," : "") << fmt(columns[c][r]);
        os << "\n";
    }
}

void write_product_table(std::ostream& os, const ProductDiagnostics& pd) {
    os << pd.first_label << ',' << pd.second_label << ",subcritical,"
       << to_string(pd.subcritical.verdict) << ",\"" << pd.subcritical.rule << "\"\n";
    os << pd.first_label << ',' << pd.second_label << ",complete,"
       << to_string(pd.complete.verdict) << ",\"" << pd.complete.rule << "\"\n";
    os << pd.first_label << ',' << pd.second_label << ",l1_liouville,"
       << to_string(pd.l1_liouville.verdict) << ",\"" << pd.l1_liouville.rule << "\"\n";
}

}  // namespace stochlab::csv
