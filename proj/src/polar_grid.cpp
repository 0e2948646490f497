#include "conelab/polar_grid.hpp"

#include "conelab/errors.hpp"

#include <cmath>

namespace conelab {

PolarGrid::PolarGrid(const ConeParams& c, int nr, int ntheta, double radius)
    : cone(c), n_r(nr), n_theta(ntheta), R(radius) {
    if (nr < 1 || ntheta < 3 || !(radius > 0.0)) {
        throw config_error("PolarGrid: need n_r >= 1, n_theta >= 3, R > 0");
    }
}

double PolarGrid::node_area(int ring) const {
    if (ring == 0) {
        return cone.length * dr() * dr() / 8.0;
    }
    const double base = r_of(ring) * dr() * dtheta();
    return ring == n_r ? 0.5 * base : base;
}

double ScalarField::interpolate(double r, double theta) const {
    const PolarGrid& g = grid;
    if (r >= g.R) {
        r = g.R;
    }
    if (r < 0.0) {
        throw config_error("ScalarField::interpolate: negative radius");
    }
    const double l = g.cone.length;
    double t = std::fmod(theta, l);
    if (t < 0.0) {
        t += l;
    }
    const double fj = t / g.dtheta();
    int j0 = static_cast<int>(std::floor(fj));
    double wj = fj - j0;
    if (j0 >= g.n_theta) { // t == l after rounding
        j0 = 0;
        wj = 0.0;
    }

    const double fi = r / g.dr();
    int i0 = static_cast<int>(std::floor(fi));
    double wi = fi - i0;
    if (i0 >= g.n_r) {
        i0 = g.n_r - 1;
        wi = 1.0;
    }
    if (i0 == 0) {
        // Inner annulus: blend vertex value with ring 1 (linear in r).
        const double ring1 =
            (1.0 - wj) * values[g.id(1, j0)] + wj * values[g.id(1, j0 + 1)];
        return (1.0 - wi) * values[0] + wi * ring1;
    }
    const double lo =
        (1.0 - wj) * values[g.id(i0, j0)] + wj * values[g.id(i0, j0 + 1)];
    const double hi =
        (1.0 - wj) * values[g.id(i0 + 1, j0)] + wj * values[g.id(i0 + 1, j0 + 1)];
    return (1.0 - wi) * lo + wi * hi;
}

} // namespace conelab
