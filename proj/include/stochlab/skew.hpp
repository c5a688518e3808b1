#pragma once

#include "stochlab/diagnostics.hpp"

namespace stochlab {

/// k((x1,x2),(y1,y2),t) = k1(x1,y1,t) k2(x2,y2,t) on the tensor grid,
/// flattened row-major over full-grid nodes (i1 * n2 + i2).
std::vector<double> product_kernel(const KernelSlice& s1, const KernelSlice& s2, double t);

struct ProductMass {
    std::vector<double> times;
    std::vector<std::vector<double>> values;  ///< per time, flattened tensor grid
    std::size_t n1 = 0, n2 = 0;
};

/// m((x1,x2),t) = m1(x1,t) m2(x2,t) at the shared time levels.
ProductMass product_mass(const MassCurve& m1, const MassCurve& m2);

/// Direct 2-D implicit Euler for the tensor-sum operator (unsplit banded
/// solve), the independent oracle for the product formula.
std::vector<double> evolve2d(const DiscreteOperator& op1, const DiscreteOperator& op2,
                             std::vector<double> u0_flat_full, double t, double dt);

/// Tensor delta/ones initial data helpers on the flattened full grid.
std::vector<double> tensor_ones(const DiscreteOperator& op1, const DiscreteOperator& op2);
std::vector<double> tensor_delta(const DiscreteOperator& op1, const DiscreteOperator& op2,
                                 int y1, int y2);

enum class RuleVerdict { Yes, No, Undetermined };

struct RuledVerdict {
    RuleVerdict verdict = RuleVerdict::Undetermined;
    std::string rule;  ///< citation of the applied composition rule
};

struct ProductDiagnostics {
    std::string first_label, second_label;
    RuledVerdict subcritical;
    RuledVerdict complete;
    RuledVerdict l1_liouville;
};

/// Subcriticality transfer: subcritical as soon as one factor is.
RuledVerdict product_subcriticality(const DiagnosticsReport& d1, const DiagnosticsReport& d2);

/// The composition rule table for skew products. Rules citing a symmetry
/// hypothesis receive the factor flags explicitly.
ProductDiagnostics theorem54_table(const DiagnosticsReport& d1, const DiagnosticsReport& d2,
                                   bool sym1, bool sym2);

const char* to_string(RuleVerdict v);

}  // namespace stochlab
