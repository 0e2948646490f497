#include "conelab/replace.hpp"

#include "conelab/errors.hpp"
#include "conelab/linalg.hpp"

#include <cmath>

namespace conelab {

std::vector<GridEdge> grid_edges(const PolarGrid& g) {
    std::vector<GridEdge> edges;
    edges.reserve(static_cast<std::size_t>(2 * g.n_r) * g.n_theta);
    const double dr = g.dr();
    const double dt = g.dtheta();
    for (int i = 0; i < g.n_r; ++i) {
        const double c = (static_cast<double>(i) + 0.5) * dr * dt / dr;
        for (int j = 0; j < g.n_theta; ++j) {
            edges.push_back({static_cast<std::uint32_t>(g.id(i, j)),
                             static_cast<std::uint32_t>(g.id(i + 1, j)), c});
        }
    }
    for (int i = 1; i <= g.n_r; ++i) {
        const double w = (i == g.n_r) ? 0.5 : 1.0;
        const double c = w * dr / (g.r_of(i) * dt);
        for (int j = 0; j < g.n_theta; ++j) {
            edges.push_back({static_cast<std::uint32_t>(g.id(i, j)),
                             static_cast<std::uint32_t>(g.id(i, j + 1)), c});
        }
    }
    return edges;
}

ReplacementResult harmonic_replacement(const ScalarField& u,
                                       const std::vector<std::uint8_t>& free_nodes,
                                       double tol, int max_iter) {
    const PolarGrid& g = u.grid;
    const std::size_t n = g.n_nodes();
    if (free_nodes.size() != n) {
        throw config_error("harmonic_replacement: mask size does not match grid");
    }
    ReplacementResult out;
    out.field = u;

    std::vector<std::int32_t> index(n, -1);
    std::size_t n_free = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (free_nodes[k]) {
            index[k] = static_cast<std::int32_t>(n_free++);
        }
    }
    if (n_free == 0) {
        out.converged = true;
        return out;
    }

    const std::vector<GridEdge> edges = grid_edges(g);
    CsrBuilder builder(n_free);
    builder.reserve(6 * n_free);
    std::vector<double> rhs(n_free, 0.0);
    for (const GridEdge& e : edges) {
        const std::int32_t ia = index[e.a];
        const std::int32_t ib = index[e.b];
        if (ia >= 0) {
            builder.add(ia, ia, e.c);
            if (ib >= 0) {
                builder.add(ia, ib, -e.c);
            } else {
                rhs[ia] += e.c * u.values[e.b];
            }
        }
        if (ib >= 0) {
            builder.add(ib, ib, e.c);
            if (ia >= 0) {
                builder.add(ib, ia, -e.c);
            } else {
                rhs[ib] += e.c * u.values[e.a];
            }
        }
    }
    const CsrMatrix A = builder.compress();

    std::vector<double> diag(n_free, 0.0);
    for (std::size_t i = 0; i < n_free; ++i) {
        for (std::int64_t k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k) {
            if (A.cols[k] == static_cast<std::int32_t>(i)) {
                diag[i] = A.vals[k];
            }
        }
    }

    LinearOp apply = [&A](const double* x, double* y) { A.multiply(x, y); };
    LinearOp jacobi = [&diag, n_free](const double* x, double* y) {
        for (std::size_t i = 0; i < n_free; ++i) {
            y[i] = x[i] / diag[i];
        }
    };
    std::vector<double> x;
    // The weighted-mean residual below is the contract; the CG relative
    // tolerance just needs to land under it and is driven a bit lower.
    const CgResult cg =
        conjugate_gradient(apply, jacobi, rhs, x, std::min(tol, 1e-10), max_iter);
    out.iterations = cg.iterations;

    for (std::size_t k = 0; k < n; ++k) {
        if (index[k] >= 0) {
            out.field.values[k] = x[index[k]];
        }
    }

    // Max-norm weighted-mean defect on the free set.
    std::vector<double> defect(n, 0.0), weight(n, 0.0);
    for (const GridEdge& e : edges) {
        const double d = out.field.values[e.a] - out.field.values[e.b];
        defect[e.a] += e.c * d;
        defect[e.b] -= e.c * d;
        weight[e.a] += e.c;
        weight[e.b] += e.c;
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (free_nodes[k]) {
            out.residual = std::max(out.residual, std::abs(defect[k]) / weight[k]);
        }
    }
    out.converged = out.residual <= tol;
    if (!out.converged && !cg.converged) {
        // Caller decides whether a stale residual is fatal; flag only.
        out.converged = false;
    }
    return out;
}

} // namespace conelab
