#pragma once

#include <optional>
#include <utility>
#include <vector>

namespace memclf {

struct PixelCoord {
    int row = 0;
    int col = 0;
    bool operator==(const PixelCoord&) const = default;
    bool operator<(const PixelCoord& o) const {
        return row != o.row ? row < o.row : col < o.col;
    }
};

// Convex hull of integer pixel coordinates (Andrew's monotone chain),
// counter-clockwise in (x=col, y=row) coordinates, starting from the
// lexicographically smallest point. Collinear boundary points are dropped.
// Degenerate inputs return what is left after deduplication: a single point
// or the two endpoints of a segment.
std::vector<PixelCoord> convex_hull(std::vector<PixelCoord> points);

// True when (row, col) lies inside or on the hull polygon (eps-tolerant).
bool point_in_hull(const std::vector<PixelCoord>& hull, double row, double col,
                   double eps = 1e-9);

// Column extent [min_col, max_col] of the hull on a given pixel row, or
// nullopt when the row does not intersect the hull.
std::optional<std::pair<double, double>> hull_row_extent(
    const std::vector<PixelCoord>& hull, int row);

}  // namespace memclf
