#pragma once

#include <cmath>
#include <cstdint>

#include "geonet/geometry.hpp"

namespace geonet {

/// Row-major subdivision of the [1..G]^2 grid into cols x rows cells,
/// 1-based cell indices. Boundary points belong to the lower-index cell.
struct CellGrid {
    std::int64_t grid_side = 1;
    std::int64_t cols = 1;
    std::int64_t rows = 1;

    double cell_width() const { return static_cast<double>(grid_side) / static_cast<double>(cols); }
    double cell_height() const { return static_cast<double>(grid_side) / static_cast<double>(rows); }
    std::uint32_t cell_count() const { return static_cast<std::uint32_t>(cols * rows); }

    std::uint32_t index_of(GridPoint p) const {
        const auto strip = [this](std::int64_t coord, std::int64_t divisions) -> std::int64_t {
            // Largest j in [0, divisions-1] with j * (G/divisions) < coord-1,
            // i.e. boundary coordinates fall to the lower strip.
            const std::int64_t t = (coord - 1) * divisions;
            return t == 0 ? 0 : (t - 1) / grid_side;
        };
        const std::int64_t col = strip(p.x, cols);
        const std::int64_t row = strip(p.y, rows);
        return static_cast<std::uint32_t>(row * cols + col + 1);
    }

    double diagonal() const {
        const double w = cell_width();
        const double h = cell_height();
        return std::sqrt(w * w + h * h);
    }

    /// Default subdivision: floor(sqrt(n-1)) per side. Square cells keep the
    /// diagonal at sqrt(2)*G/sqrt(cells) exactly, and cols*rows <= n-1 holds
    /// by construction (pigeonhole).
    static CellGrid theorem_grid(std::size_t n, std::int64_t grid_side) {
        if (n < 2) throw ParameterError("theorem_grid: need at least 2 nodes");
        CellGrid g;
        g.grid_side = grid_side;
        const auto side = std::max<std::int64_t>(
            1, static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<double>(n - 1)))));
        g.cols = side;
        g.rows = side;
        return g;
    }

    /// Square grid realizing the "sqrt(k) by sqrt(k)" subdivision; uses
    /// ceil(sqrt(k)) when that still leaves fewer than n cells, else
    /// floor(sqrt(k)).
    static CellGrid square_grid(std::uint64_t k, std::size_t n, std::int64_t grid_side) {
        if (k < 2 || k > n - 1) throw ParameterError("square_grid: k must lie in [2, n-1]");
        std::int64_t s = static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(k))));
        if (s * s > static_cast<std::int64_t>(n - 1))
            s = static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<double>(k))));
        s = std::max<std::int64_t>(1, s);
        CellGrid g;
        g.grid_side = grid_side;
        g.cols = s;
        g.rows = s;
        return g;
    }
};

}  // namespace geonet
