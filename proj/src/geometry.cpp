#include "memclf/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace memclf {

namespace {

// Cross product of (b - a) x (c - a) in (x=col, y=row) coordinates.
long long cross(const PixelCoord& a, const PixelCoord& b, const PixelCoord& c) {
    long long abx = b.col - a.col, aby = b.row - a.row;
    long long acx = c.col - a.col, acy = c.row - a.row;
    return abx * acy - aby * acx;
}

}  // namespace

std::vector<PixelCoord> convex_hull(std::vector<PixelCoord> points) {
    std::sort(points.begin(), points.end(), [](const PixelCoord& a, const PixelCoord& b) {
        return a.col != b.col ? a.col < b.col : a.row < b.row;
    });
    points.erase(std::unique(points.begin(), points.end()), points.end());
    const std::size_t n = points.size();
    if (n <= 2) return points;

    std::vector<PixelCoord> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {  // lower chain
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
        hull[k++] = points[i];
    }
    for (std::size_t i = n - 1, lower = k + 1; i-- > 0;) {  // upper chain
        while (k >= lower && cross(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
        hull[k++] = points[i];
    }
    hull.resize(k - 1);  // last point repeats the first
    return hull;
}

bool point_in_hull(const std::vector<PixelCoord>& hull, double row, double col, double eps) {
    if (hull.empty()) return false;
    if (hull.size() == 1)
        return std::abs(row - hull[0].row) <= eps && std::abs(col - hull[0].col) <= eps;
    if (hull.size() == 2) {
        double abx = hull[1].col - hull[0].col, aby = hull[1].row - hull[0].row;
        double apx = col - hull[0].col, apy = row - hull[0].row;
        if (std::abs(abx * apy - aby * apx) > eps * std::max(1.0, std::hypot(abx, aby)))
            return false;
        double t = (apx * abx + apy * aby) / (abx * abx + aby * aby);
        return t >= -eps && t <= 1.0 + eps;
    }
    // CCW polygon in (x=col, y=row): inside iff every edge cross >= -eps.
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const PixelCoord& a = hull[i];
        const PixelCoord& b = hull[(i + 1) % hull.size()];
        double abx = b.col - a.col, aby = b.row - a.row;
        double apx = col - a.col, apy = row - a.row;
        if (abx * apy - aby * apx < -eps) return false;
    }
    return true;
}

std::optional<std::pair<double, double>> hull_row_extent(
    const std::vector<PixelCoord>& hull, int row) {
    if (hull.empty()) return std::nullopt;
    if (hull.size() == 1) {
        if (hull[0].row != row) return std::nullopt;
        double c = hull[0].col;
        return std::make_pair(c, c);
    }
    double lo = 0.0, hi = 0.0;
    bool any = false;
    auto add = [&](double c) {
        if (!any) {
            lo = hi = c;
            any = true;
        } else {
            lo = std::min(lo, c);
            hi = std::max(hi, c);
        }
    };
    const std::size_t n = hull.size();
    const std::size_t edges = n == 2 ? 1 : n;  // segment has one edge, polygon wraps
    for (std::size_t i = 0; i < edges; ++i) {
        const PixelCoord& a = hull[i];
        const PixelCoord& b = hull[(i + 1) % n];
        if (a.row == b.row) {
            if (a.row == row) {
                add(a.col);
                add(b.col);
            }
            continue;
        }
        int rlo = std::min(a.row, b.row), rhi = std::max(a.row, b.row);
        if (row < rlo || row > rhi) continue;
        double t = static_cast<double>(row - a.row) / (b.row - a.row);
        add(a.col + t * (b.col - a.col));
    }
    if (!any) return std::nullopt;
    return std::make_pair(lo, hi);
}

}  // namespace memclf
