#pragma once

#include "stochlab/grid.hpp"

#include <span>

namespace stochlab {

enum class Scheme { Central, Upwind };

/// Tridiagonal realization of rho * (-a D2 + b D1) on the active node range.
/// The right truncation boundary is always Dirichlet (row removed); the left
/// end follows the spec's boundary kind. Interior rows satisfy the M-matrix
/// sign pattern and sum to zero exactly (diag is built as -(sub+super)).
struct DiscreteOperator {
    Grid1D grid;
    int i_lo = 0;                 ///< first active node index
    int i_hi = 0;                 ///< last active node index (inclusive)
    std::vector<double> sub, diag, super;  ///< bands over active rows
    double left_coupling = 0.0;   ///< dropped coupling to the left Dirichlet node
    double right_coupling = 0.0;  ///< dropped coupling to the right Dirichlet node
    Scheme scheme = Scheme::Central;
    int upwind_nodes = 0;
    LeftBoundary left = LeftBoundary::RegularReflecting;
    std::vector<double> v_nodes;  ///< measure samples at every grid node

    std::size_t active_count() const { return diag.size(); }

    /// Applies the finite-difference stencil to full-grid samples (boundary
    /// values participate through the dropped couplings). Returns a full-grid
    /// vector, zero at inactive nodes.
    std::vector<double> apply(std::span<const double> u_full) const;
};

DiscreteOperator assemble(const OperatorSpec& spec, const Grid1D& grid);

/// Prefactored Thomas solve of (sigma I + tau A); reusable across time steps.
/// sigma = 1, tau = dt gives the implicit-Euler step; sigma = 0, tau = 1 the
/// bare operator (nonsingular thanks to the Dirichlet truncation rows).
class TridiagFactor {
public:
    TridiagFactor(const DiscreteOperator& op, double tau, double sigma = 1.0);
    /// Solves in place on the active-range vector.
    void solve(std::span<double> rhs_active) const;

private:
    std::vector<double> w_, dhat_, upper_;
};

/// Node-index window [lo,hi] away from Dirichlet truncation boundaries:
/// 10% of the span trimmed at each Dirichlet end.
std::pair<int, int> probe_window(const DiscreteOperator& op);

}  // namespace stochlab
