#include "stochlab/grid.hpp"

#include <cmath>

namespace stochlab {

int Grid1D::index_of(double r) const {
    long i = std::lround((r - r_min) / h);
    if (i < 0 || i >= static_cast<long>(nodes.size()) ||
        std::fabs(nodes[static_cast<std::size_t>(i)] - r) > 0.5 * h + 1e-12)
        throw PreconditionError("grid: coordinate " + std::to_string(r) + " is off-grid");
    return static_cast<int>(i);
}

Grid1D make_grid(double r_min, double R, double h) {
    if (!(h > 0.0)) throw PreconditionError("grid: h must be > 0");
    long N = std::lround((R - r_min) / h);
    if (N < 11) throw PreconditionError("grid: need R > r_min + 10 h");
    Grid1D g;
    g.r_min = r_min;
    g.h = h;
    g.R = r_min + static_cast<double>(N) * h;
    g.nodes.resize(static_cast<std::size_t>(N) + 1);
    for (long i = 0; i <= N; ++i) g.nodes[static_cast<std::size_t>(i)] = r_min + i * h;
    return g;
}

Grid1D grid_for(const OperatorSpec& spec, double R, double h) {
    if (spec.coeffs.left == LeftBoundary::EntireLine) return make_grid(-R, R, h);
    return make_grid(spec.coeffs.r_min, R, h);
}

Grid1D refine(const Grid1D& grid, int factor) {
    if (factor < 2) throw PreconditionError("refine: factor must be >= 2");
    return make_grid(grid.r_min, grid.R, grid.h / factor);
}

std::vector<Grid1D> exhaust(const Grid1D& grid, std::span<const double> schedule) {
    if (schedule.empty()) throw PreconditionError("exhaust: empty schedule");
    std::vector<Grid1D> out;
    double prev = grid.r_min;
    for (double R : schedule) {
        if (!(R > prev)) throw PreconditionError("exhaust: schedule must be strictly increasing");
        prev = R;
        // entire-line grids extend both ends symmetrically
        double lo = (grid.r_min < 0.0) ? -R : grid.r_min;
        out.push_back(make_grid(lo, R, grid.h));
    }
    return out;
}

}  // namespace stochlab
