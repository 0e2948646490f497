#pragma once

#include <cstddef>
#include <vector>

namespace conelab {

/// A sampled quantity over increasing radii together with the list of
/// consecutive decreases that exceed the tolerance.  All three monotone
/// quantities (scaled Dirichlet average, ACF product, Weiss energy) report
/// through this container.
struct MonotoneScan {
    struct Violation {
        double r_lo = 0.0;
        double r_hi = 0.0;
        double drop = 0.0; // value(r_lo) - value(r_hi) > tolerance
    };

    std::vector<double> radii;
    std::vector<double> values;
    std::vector<Violation> violations;
    double tolerance = 0.0;
    bool relative = false;

    bool monotone() const { return violations.empty(); }
};

/// Builds the scan record; a decrease counts as a violation when it exceeds
/// tolerance (times max(|v_i|, |v_{i+1}|) in relative mode).
MonotoneScan make_scan(std::vector<double> radii, std::vector<double> values,
                       double tolerance, bool relative);

} // namespace conelab
