#pragma once

#include <vector>

namespace hardyrad {

/// Gauss-Legendre rule mapped to the reference interval [0, 1]; weights sum
/// to 1. Exact for polynomials of degree 2*order - 1.
struct GaussLegendre {
    std::vector<double> points;
    std::vector<double> weights;

    explicit GaussLegendre(int order);
    int order() const noexcept { return static_cast<int>(points.size()); }
};

} // namespace hardyrad
