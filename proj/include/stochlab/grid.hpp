#pragma once

#include "stochlab/model.hpp"

#include <span>
#include <vector>

namespace stochlab {

/// Equispaced nodes r_min + i h, i = 0..N with r_min + N h == R.
struct Grid1D {
    double r_min = 0.0;
    double R = 0.0;
    double h = 0.0;
    std::vector<double> nodes;

    std::size_t size() const { return nodes.size(); }
    /// Index of the node nearest to r (must land within h/2 of a node).
    int index_of(double r) const;
};

Grid1D make_grid(double r_min, double R, double h);

/// Domain-aware grid for a spec: [r_min, R] for half-line specs, [-R, R] for
/// entire-line specs.
Grid1D grid_for(const OperatorSpec& spec, double R, double h);

Grid1D refine(const Grid1D& grid, int factor);

/// Dirichlet exhaustion: same r_min and h, truncations at the schedule entries.
std::vector<Grid1D> exhaust(const Grid1D& grid, std::span<const double> schedule);

}  // namespace stochlab
