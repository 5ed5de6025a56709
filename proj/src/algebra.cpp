#include "cdeal/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cdeal {

namespace {

std::vector<double> merged_knots(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    std::vector<double> out;
    for (double x : xs) {
        if (out.empty() || x - out.back() > 1e-14) out.push_back(x);
    }
    return out;
}

}  // namespace

DistortionFunction pointwise_min(const std::vector<DistortionFunction>& distortions) {
    if (distortions.empty()) throw DomainError("pointwise minimum of an empty list");
    if (distortions.size() == 1) return distortions.front();

    std::vector<double> grid;
    for (const auto& d : distortions) grid.insert(grid.end(), d.xs().begin(), d.xs().end());
    grid = merged_knots(std::move(grid));

    std::vector<double> points = grid;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double lo = grid[i];
        const double hi = grid[i + 1];
        for (std::size_t n = 0; n < distortions.size(); ++n) {
            for (std::size_t m = n + 1; m < distortions.size(); ++m) {
                const double da = distortions[n](lo) - distortions[m](lo);
                const double db = distortions[n](hi) - distortions[m](hi);
                if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0)) {
                    const double t = da / (da - db);
                    points.push_back(lo + t * (hi - lo));
                }
            }
        }
    }
    points = merged_knots(std::move(points));
    points.front() = 0.0;
    points.back() = 1.0;

    std::vector<double> values;
    values.reserve(points.size());
    for (double x : points) {
        double v = std::numeric_limits<double>::infinity();
        for (const auto& d : distortions) v = std::min(v, d(x));
        values.push_back(v);
    }
    return DistortionFunction(std::move(points), std::move(values));
}

WeightingMeasure convolve_wvar(const std::vector<WeightingMeasure>& measures) {
    if (measures.empty()) throw DomainError("convolution of an empty list of measures");
    if (measures.size() == 1) return measures.front();
    std::vector<DistortionFunction> ds;
    ds.reserve(measures.size());
    for (const auto& mu : measures) ds.push_back(distortion(mu));
    return weighting_measure(pointwise_min(ds));
}

double rho_max(const std::vector<WeightingMeasure>& measures, const RandomVariable& x) {
    if (measures.empty()) throw DomainError("maximum over an empty list of measures");
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& mu : measures) best = std::max(best, rho_wvar(mu, x));
    return best;
}

DistortionFunction minimal_concave_majorant(const std::vector<DistortionFunction>& distortions) {
    if (distortions.empty()) throw DomainError("concave majorant of an empty list");
    std::vector<std::pair<double, double>> pts;
    for (const auto& d : distortions) {
        for (std::size_t j = 0; j < d.xs().size(); ++j) pts.emplace_back(d.xs()[j], d.values()[j]);
    }
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        return a.first < b.first || (a.first == b.first && a.second > b.second);
    });

    // Upper hull, monotone chain.
    std::vector<std::pair<double, double>> hull;
    for (const auto& pt : pts) {
        if (!hull.empty() && pt.first == hull.back().first) continue;
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull.back();
            const double cross =
                (b.first - a.first) * (pt.second - a.second) - (b.second - a.second) * (pt.first - a.first);
            if (cross >= 0.0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(pt);
    }
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& [x, y] : hull) {
        xs.push_back(x);
        ys.push_back(y);
    }
    return DistortionFunction(std::move(xs), std::move(ys));
}

}  // namespace cdeal
