#pragma once

#include "conelab/cone.hpp"

#include <cstddef>
#include <vector>

namespace conelab {

/// Polar grid on the cone ball C_R: rings r_i = i*R/n_r (i = 0..n_r, i = 0
/// is the single vertex node) and angles theta_j = j*l/n_theta with the seam
/// j = n_theta identified with j = 0.  Node ids: 0 = vertex, then ring-major.
struct PolarGrid {
    ConeParams cone;
    int n_r = 0;
    int n_theta = 0;
    double R = 1.0;

    PolarGrid() = default;
    PolarGrid(const ConeParams& c, int nr, int ntheta, double radius = 1.0);

    double dr() const { return R / n_r; }
    double dtheta() const { return cone.length / n_theta; }
    std::size_t n_nodes() const {
        return 1 + static_cast<std::size_t>(n_r) * n_theta;
    }

    /// i in [0, n_r], j any integer (wrapped); i = 0 collapses to the vertex.
    std::size_t id(int i, int j) const {
        if (i == 0) {
            return 0;
        }
        int jw = j % n_theta;
        if (jw < 0) {
            jw += n_theta;
        }
        return 1 + static_cast<std::size_t>(i - 1) * n_theta + jw;
    }
    std::size_t vertex_id() const { return 0; }

    int ring_of(std::size_t id) const {
        return id == 0 ? 0 : 1 + static_cast<int>((id - 1) / n_theta);
    }
    int angle_of(std::size_t id) const {
        return id == 0 ? 0 : static_cast<int>((id - 1) % n_theta);
    }

    double r_of(int i) const { return dr() * i; }
    double theta_of(int j) const { return dtheta() * j; }

    /// Midpoint-rule node area: r_i*dr*dtheta on interior rings, halved on
    /// the boundary ring, l*dr^2/8 at the vertex.  Sums to (l/2)R^2 up to
    /// O(1/n_r^2).
    double node_area(int ring) const;

    bool same_shape(const PolarGrid& o) const {
        return n_r == o.n_r && n_theta == o.n_theta && R == o.R &&
               cone.length == o.cone.length;
    }
};

/// Grid-sampled function; value semantics (grid copied in, it is small).
struct ScalarField {
    PolarGrid grid;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(const PolarGrid& g)
        : grid(g), values(g.n_nodes(), 0.0) {}

    double& at(int i, int j) { return values[grid.id(i, j)]; }
    double at(int i, int j) const { return values[grid.id(i, j)]; }
    double vertex() const { return values[0]; }

    /// Bilinear interpolation in (r, theta) with seam wrap; r <= dr blends
    /// toward the vertex value linearly in r.
    double interpolate(double r, double theta) const;

    /// Samples a callable f(r, theta) at every node.
    template <typename F>
    static ScalarField sample(const PolarGrid& g, F&& f) {
        ScalarField out(g);
        out.values[0] = f(0.0, 0.0);
        for (int i = 1; i <= g.n_r; ++i) {
            for (int j = 0; j < g.n_theta; ++j) {
                out.values[g.id(i, j)] = f(g.r_of(i), g.theta_of(j));
            }
        }
        return out;
    }
};

/// Uniform Cartesian grid for the half-plane constructions; row-major
/// values, node (ix, iy) at (x0 + ix*h, y0 + iy*h).
struct CartesianGrid {
    double x0 = 0.0;
    double y0 = 0.0;
    double h = 1.0;
    int nx = 0;
    int ny = 0;

    std::size_t n_nodes() const {
        return static_cast<std::size_t>(nx) * ny;
    }
    std::size_t id(int ix, int iy) const {
        return static_cast<std::size_t>(iy) * nx + ix;
    }
    double x_of(int ix) const { return x0 + h * ix; }
    double y_of(int iy) const { return y0 + h * iy; }
};

struct CartesianField {
    CartesianGrid grid;
    std::vector<double> values;

    CartesianField() = default;
    explicit CartesianField(const CartesianGrid& g)
        : grid(g), values(g.n_nodes(), 0.0) {}

    double& at(int ix, int iy) { return values[grid.id(ix, iy)]; }
    double at(int ix, int iy) const { return values[grid.id(ix, iy)]; }
};

} // namespace conelab
