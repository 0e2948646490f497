#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace conelab {

/// Compressed sparse row matrix; symmetric systems store both triangles.
struct CsrMatrix {
    std::vector<std::int64_t> row_ptr;
    std::vector<std::int32_t> cols;
    std::vector<double> vals;
    std::size_t n = 0;

    void multiply(const double* x, double* y) const;
};

/// Triplet accumulator with duplicate summation on compress.
class CsrBuilder {
public:
    explicit CsrBuilder(std::size_t n) : n_(n), row_counts_(n, 0) {}

    void reserve(std::size_t nnz);
    void add(std::int32_t row, std::int32_t col, double val);
    CsrMatrix compress();

private:
    std::size_t n_;
    std::vector<std::int64_t> row_counts_;
    std::vector<std::int32_t> rows_, cols_;
    std::vector<double> vals_;
};

struct CgResult {
    int iterations = 0;
    double residual_norm = 0.0; // ||b - A x|| / ||b||
    bool converged = false;
};

using LinearOp = std::function<void(const double*, double*)>;

/// Preconditioned conjugate gradient with fixed serial reduction order, so
/// repeated runs are bit-identical.  `precond` may be null (identity).
CgResult conjugate_gradient(const LinearOp& apply, const LinearOp& precond,
                            const std::vector<double>& b, std::vector<double>& x,
                            double rel_tol, int max_iter);

/// Solves the tridiagonal system in place: diag d, sub/super l/u (l[i] links
/// row i to i-1, u[i] links row i to i+1); standard Thomas elimination.
void solve_tridiagonal(std::vector<double>& d, const std::vector<double>& lower,
                       const std::vector<double>& upper, std::vector<double>& rhs);

/// In-place lower Cholesky factor of the dense SPD matrix a (row-major,
/// n by n); throws convergence_error on a non-positive pivot.
void factor_spd(std::vector<double>& a, std::size_t n);

/// Solves L L^T x = rhs in place given the factor from factor_spd.
void solve_spd(const std::vector<double>& a, std::size_t n,
               std::vector<double>& rhs);

} // namespace conelab
