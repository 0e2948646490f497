#include "conelab/linalg.hpp"

#include "conelab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace conelab {

void CsrMatrix::multiply(const double* x, double* y) const {
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::int64_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
            acc += vals[k] * x[cols[k]];
        }
        y[i] = acc;
    }
}

void CsrBuilder::reserve(std::size_t nnz) {
    rows_.reserve(nnz);
    cols_.reserve(nnz);
    vals_.reserve(nnz);
}

void CsrBuilder::add(std::int32_t row, std::int32_t col, double val) {
    rows_.push_back(row);
    cols_.push_back(col);
    vals_.push_back(val);
    ++row_counts_[row];
}

CsrMatrix CsrBuilder::compress() {
    CsrMatrix m;
    m.n = n_;
    m.row_ptr.assign(n_ + 1, 0);
    for (std::size_t i = 0; i < n_; ++i) {
        m.row_ptr[i + 1] = m.row_ptr[i] + row_counts_[i];
    }
    const std::size_t nnz = rows_.size();
    std::vector<std::int64_t> cursor(m.row_ptr.begin(), m.row_ptr.end() - 1);
    std::vector<std::int32_t> cols(nnz);
    std::vector<double> vals(nnz);
    for (std::size_t k = 0; k < nnz; ++k) {
        const std::int64_t slot = cursor[rows_[k]]++;
        cols[slot] = cols_[k];
        vals[slot] = vals_[k];
    }
    // Sort each row by column and fold duplicates.
    m.cols.reserve(nnz);
    m.vals.reserve(nnz);
    std::vector<std::int64_t> new_ptr(n_ + 1, 0);
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < n_; ++i) {
        const std::int64_t lo = m.row_ptr[i], hi = m.row_ptr[i + 1];
        order.resize(hi - lo);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return cols[lo + a] < cols[lo + b];
        });
        for (std::size_t k = 0; k < order.size(); ++k) {
            const std::int32_t c = cols[lo + order[k]];
            const double v = vals[lo + order[k]];
            if (!m.cols.empty() &&
                static_cast<std::int64_t>(m.cols.size()) > new_ptr[i] &&
                m.cols.back() == c) {
                m.vals.back() += v;
            } else {
                m.cols.push_back(c);
                m.vals.push_back(v);
            }
        }
        new_ptr[i + 1] = static_cast<std::int64_t>(m.cols.size());
    }
    m.row_ptr = std::move(new_ptr);
    return m;
}

CgResult conjugate_gradient(const LinearOp& apply, const LinearOp& precond,
                            const std::vector<double>& b, std::vector<double>& x,
                            double rel_tol, int max_iter) {
    const std::size_t n = b.size();
    x.assign(n, 0.0);
    std::vector<double> r = b;
    std::vector<double> z(n), p(n), ap(n);

    auto dot = [n](const std::vector<double>& a, const std::vector<double>& c) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += a[i] * c[i];
        }
        return acc;
    };

    const double b_norm = std::sqrt(dot(b, b));
    CgResult out;
    if (b_norm == 0.0) {
        out.converged = true;
        return out;
    }
    if (precond) {
        precond(r.data(), z.data());
    } else {
        z = r;
    }
    p = z;
    double rz = dot(r, z);
    for (int it = 0; it < max_iter; ++it) {
        apply(p.data(), ap.data());
        const double p_ap = dot(p, ap);
        if (p_ap <= 0.0) {
            break; // loss of positive definiteness; report non-convergence
        }
        const double alpha = rz / p_ap;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        out.iterations = it + 1;
        const double r_norm = std::sqrt(dot(r, r));
        out.residual_norm = r_norm / b_norm;
        if (out.residual_norm <= rel_tol) {
            out.converged = true;
            return out;
        }
        if (precond) {
            precond(r.data(), z.data());
        } else {
            z = r;
        }
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = z[i] + beta * p[i];
        }
    }
    return out;
}

void factor_spd(std::vector<double>& a, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) {
        double pivot = a[j * n + j];
        for (std::size_t k = 0; k < j; ++k) {
            pivot -= a[j * n + k] * a[j * n + k];
        }
        if (!(pivot > 0.0)) {
            throw convergence_error("factor_spd: matrix is not positive definite");
        }
        const double l_jj = std::sqrt(pivot);
        a[j * n + j] = l_jj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double acc = a[i * n + j];
            for (std::size_t k = 0; k < j; ++k) {
                acc -= a[i * n + k] * a[j * n + k];
            }
            a[i * n + j] = acc / l_jj;
        }
    }
}

void solve_spd(const std::vector<double>& a, std::size_t n,
               std::vector<double>& rhs) {
    for (std::size_t i = 0; i < n; ++i) {
        double acc = rhs[i];
        for (std::size_t k = 0; k < i; ++k) {
            acc -= a[i * n + k] * rhs[k];
        }
        rhs[i] = acc / a[i * n + i];
    }
    for (std::size_t i = n; i-- > 0;) {
        double acc = rhs[i];
        for (std::size_t k = i + 1; k < n; ++k) {
            acc -= a[k * n + i] * rhs[k];
        }
        rhs[i] = acc / a[i * n + i];
    }
}

void solve_tridiagonal(std::vector<double>& d, const std::vector<double>& lower,
                       const std::vector<double>& upper, std::vector<double>& rhs) {
    const std::size_t n = d.size();
    if (n == 0) {
        return;
    }
    for (std::size_t i = 1; i < n; ++i) {
        const double w = lower[i] / d[i - 1];
        d[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    rhs[n - 1] /= d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / d[i];
    }
}

} // namespace conelab
