#include "qsp/grid.hpp"

#include <algorithm>
#include <stdexcept>

namespace qsp {

TimeGrid::TimeGrid(std::vector<double> points) : pts_(std::move(points)) {
    if (pts_.size() < 3) throw std::invalid_argument("TimeGrid: need at least 3 points");
    if (pts_.front() < 0.0) throw std::invalid_argument("TimeGrid: negative time");
    for (std::size_t i = 1; i < pts_.size(); ++i) {
        if (!(pts_[i] > pts_[i - 1])) throw std::invalid_argument("TimeGrid: points must strictly increase");
    }
}

TimeGrid TimeGrid::uniform(double t_max, int n) {
    if (n < 3) throw std::invalid_argument("TimeGrid::uniform: need n >= 3");
    if (!(t_max > 0.0)) throw std::invalid_argument("TimeGrid::uniform: t_max must be positive");
    std::vector<double> pts(n);
    for (int i = 0; i < n; ++i) pts[i] = t_max * i / (n - 1);
    return TimeGrid(std::move(pts));
}

TimeGrid TimeGrid::uniform_with(double t_max, int n, const std::vector<double>& extra) {
    TimeGrid base = uniform(t_max, n);
    std::vector<double> pts = base.points();
    for (double e : extra) {
        if (e >= 0.0 && e <= t_max) pts.push_back(e);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return TimeGrid(std::move(pts));
}

std::vector<std::array<double, 3>> TimeGrid::triples() const {
    std::vector<std::array<double, 3>> out;
    const std::size_t n = pts_.size();
    out.reserve(n * (n - 1) * (n - 2) / 6);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            for (std::size_t c = b + 1; c < n; ++c) out.push_back({pts_[a], pts_[b], pts_[c]});
    return out;
}

std::vector<std::array<double, 2>> TimeGrid::pairs() const {
    std::vector<std::array<double, 2>> out;
    const std::size_t n = pts_.size();
    out.reserve(n * (n - 1) / 2);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) out.push_back({pts_[a], pts_[b]});
    return out;
}

void VerificationReport::record(const TripleResidual& r) {
    residuals.push_back(r);
    if (r.residual > max_residual || residuals.size() == 1) {
        max_residual = r.residual;
        worst = r;
    }
    if (r.residual > tol) ++failures;
}

}  // namespace qsp
