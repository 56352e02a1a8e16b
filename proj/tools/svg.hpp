#pragma once

#include <string>
#include <vector>

namespace hardyrad::cli {

/// Polyline plot in a fixed 640x400 viewport with axis ranges printed in the corners.
std::string render_polyline_svg(const std::vector<double>& x, const std::vector<double>& y,
                                const std::string& title);

} // namespace hardyrad::cli
