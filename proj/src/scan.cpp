#include "conelab/scan.hpp"

#include <cmath>
#include <utility>

namespace conelab {

MonotoneScan make_scan(std::vector<double> radii, std::vector<double> values,
                       double tolerance, bool relative) {
    MonotoneScan scan;
    scan.tolerance = tolerance;
    scan.relative = relative;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        const double drop = values[i] - values[i + 1];
        const double tol =
            relative ? tolerance * std::max(std::abs(values[i]), std::abs(values[i + 1]))
                     : tolerance;
        if (drop > tol) {
            scan.violations.push_back({radii[i], radii[i + 1], drop});
        }
    }
    scan.radii = std::move(radii);
    scan.values = std::move(values);
    return scan;
}

} // namespace conelab
