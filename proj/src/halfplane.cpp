#include "conelab/halfplane.hpp"

#include "conelab/errors.hpp"
#include "conelab/linalg.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <mutex>
#include <numbers>
#include <utility>

namespace conelab {

namespace {

constexpr double kGeomTol = 1e-12;
constexpr double kCutClip = 1e-3;

// FFTW planning is not thread safe; execution on private buffers is.
std::mutex& fftw_planning_mutex() {
    static std::mutex m;
    return m;
}

double pin_value(double y) { return y < 0.0 ? -y : 0.0; }

/// Smallest crossing parameter of p -> p + step against the polygon edges
/// within t <= t_max (returns t_max + 1 when none).  Collinear overlaps
/// count as no hit; the caller's pinned-neighbour fallback covers them.
double min_cut(const std::vector<Segment>& edges, Vec2 p, Vec2 step,
               double t_max) {
    double best = t_max + 1.0;
    for (const Segment& e : edges) {
        const Vec2 d{e.b.x - e.a.x, e.b.y - e.a.y};
        const double denom = step.x * d.y - step.y * d.x;
        if (std::abs(denom) < 1e-14) {
            continue;
        }
        const Vec2 w{e.a.x - p.x, e.a.y - p.y};
        const double t = (w.x * d.y - w.y * d.x) / denom;
        const double s = (step.y * w.x - step.x * w.y) / denom;
        if (t >= kGeomTol && t <= t_max && s >= -kGeomTol &&
            s <= 1.0 + kGeomTol) {
            best = std::min(best, t);
        }
    }
    return best;
}

/// Scratch owning the FFTW state for the lattice Dirichlet-to-Neumann
/// convolution on the line row.
struct DtnConvolution {
    int nfft = 0;
    double* rin = nullptr;
    fftw_complex* cplx = nullptr;
    double* rout = nullptr;
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
    std::vector<double> multiplier;

    explicit DtnConvolution(int nx) {
        nfft = 1;
        while (nfft < 8 * nx) {
            nfft <<= 1;
        }
        rin = fftw_alloc_real(nfft);
        cplx = fftw_alloc_complex(nfft / 2 + 1);
        rout = fftw_alloc_real(nfft);
        {
            std::lock_guard<std::mutex> lock(fftw_planning_mutex());
            forward = fftw_plan_dft_r2c_1d(nfft, rin, cplx, FFTW_ESTIMATE);
            backward = fftw_plan_dft_c2r_1d(nfft, cplx, rout, FFTW_ESTIMATE);
        }
        multiplier.resize(nfft / 2 + 1);
        for (int m = 0; m <= nfft / 2; ++m) {
            // Decay per lattice row of the discrete harmonic extension of
            // the mode exp(i theta x / h): the root in (0, 1] of
            // mu + 1/mu = 2 (2 - cos theta).
            const double theta = 2.0 * std::numbers::pi * m / nfft;
            const double a = 2.0 - std::cos(theta);
            multiplier[m] = a - std::sqrt(a * a - 1.0);
        }
    }

    DtnConvolution(const DtnConvolution&) = delete;
    DtnConvolution& operator=(const DtnConvolution&) = delete;

    ~DtnConvolution() {
        {
            std::lock_guard<std::mutex> lock(fftw_planning_mutex());
            if (forward != nullptr) {
                fftw_destroy_plan(forward);
            }
            if (backward != nullptr) {
                fftw_destroy_plan(backward);
            }
        }
        fftw_free(rin);
        fftw_free(cplx);
        fftw_free(rout);
    }

    /// rout = inverse_fft(multiplier * fft(rin)); caller fills rin.
    void run() {
        fftw_execute(forward);
        for (int m = 0; m <= nfft / 2; ++m) {
            cplx[m][0] *= multiplier[m];
            cplx[m][1] *= multiplier[m];
        }
        fftw_execute(backward);
        const double scale = 1.0 / nfft;
        for (int k = 0; k < nfft; ++k) {
            rout[k] *= scale;
        }
    }
};

/// Geometric multigrid V-cycle over nested index-grid masks, used as the CG
/// preconditioner for the disc closure, whose node count grows quadratically
/// with the truncation radius.  Every coarse level halves the index grid
/// (coarse node free iff its even-even fine parent is) and rediscretizes
/// the unit-conductance five-point form on the subsampled mask; in two
/// dimensions that energy form carries no grid-size factor, so bilinear
/// prolongation with transposed restriction needs no rescaling.  Cut-edge
/// conductances survive only on the finest level, where the true matrix
/// smooths; the mismatch sits on a lower-dimensional set and costs a few
/// outer iterations at most.
class MgPreconditioner {
public:
    MgPreconditioner(int nx, int ny, std::vector<std::int32_t> idx,
                     const CsrMatrix& fine, const std::vector<double>& diag) {
        levels_.emplace_back();
        Level& base = levels_.front();
        base.nx = nx;
        base.ny = ny;
        base.idx = std::move(idx);
        base.n_free = fine.n;
        base.inv_diag.resize(fine.n);
        for (std::size_t i = 0; i < fine.n; ++i) {
            base.inv_diag[i] = 1.0 / diag[i];
        }
        while (true) {
            Level& top = levels_.back();
            if (top.n_free <= kCoarseLimit || std::min(top.nx, top.ny) <= 3) {
                break;
            }
            Level next = coarsen(top);
            if (next.n_free == 0 || next.n_free == top.n_free) {
                break;
            }
            levels_.push_back(std::move(next));
        }
        for (Level& lvl : levels_) {
            lvl.b.resize(lvl.n_free);
            lvl.x.resize(lvl.n_free);
            lvl.r.resize(lvl.n_free);
        }
        build_coarse_factor();
    }

    /// z = V-cycle(r); the finest level borrows the caller's matrix.
    void apply(const CsrMatrix& fine, const double* r_in, double* z_out) {
        Level& base = levels_.front();
        std::copy(r_in, r_in + base.n_free, base.b.begin());
        cycle(fine, 0);
        std::copy(base.x.begin(), base.x.end(), z_out);
    }

private:
    static constexpr std::size_t kCoarseLimit = 200;
    static constexpr double kOmega = 0.8;
    static constexpr int kSweeps = 2;

    struct Level {
        int nx = 0, ny = 0;
        std::vector<std::int32_t> idx; // nx*ny -> free id | -1
        std::size_t n_free = 0;
        CsrMatrix A; // empty on the finest level (the caller's is used)
        std::vector<double> inv_diag;
        std::vector<double> b, x, r;
    };

    std::vector<Level> levels_;
    std::vector<double> coarse_factor_;

    static Level coarsen(const Level& fine) {
        Level c;
        c.nx = (fine.nx + 1) / 2;
        c.ny = (fine.ny + 1) / 2;
        c.idx.assign(static_cast<std::size_t>(c.nx) * c.ny, -1);
        std::int32_t nf = 0;
        for (int iy = 0; iy < c.ny; ++iy) {
            for (int ix = 0; ix < c.nx; ++ix) {
                if (fine.idx[static_cast<std::size_t>(2 * iy) * fine.nx +
                             2 * ix] >= 0) {
                    c.idx[static_cast<std::size_t>(iy) * c.nx + ix] = nf++;
                }
            }
        }
        c.n_free = static_cast<std::size_t>(nf);
        if (c.n_free == 0) {
            return c;
        }
        CsrBuilder builder(c.n_free);
        builder.reserve(c.n_free * 5);
        c.inv_diag.assign(c.n_free, 0.25);
        const int dxs[4] = {1, -1, 0, 0};
        const int dys[4] = {0, 0, 1, -1};
        for (int iy = 0; iy < c.ny; ++iy) {
            for (int ix = 0; ix < c.nx; ++ix) {
                const std::int32_t id =
                    c.idx[static_cast<std::size_t>(iy) * c.nx + ix];
                if (id < 0) {
                    continue;
                }
                builder.add(id, id, 4.0);
                for (int d = 0; d < 4; ++d) {
                    const int jx = ix + dxs[d];
                    const int jy = iy + dys[d];
                    if (jx < 0 || jx >= c.nx || jy < 0 || jy >= c.ny) {
                        continue;
                    }
                    const std::int32_t nb =
                        c.idx[static_cast<std::size_t>(jy) * c.nx + jx];
                    if (nb >= 0) {
                        builder.add(id, nb, -1.0);
                    }
                }
            }
        }
        c.A = builder.compress();
        return c;
    }

    void build_coarse_factor() {
        if (levels_.size() == 1) {
            return; // degenerate hierarchy; the cycle falls back to smoothing
        }
        const Level& last = levels_.back();
        const std::size_t n = last.n_free;
        coarse_factor_.assign(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::int64_t k = last.A.row_ptr[i]; k < last.A.row_ptr[i + 1];
                 ++k) {
                coarse_factor_[i * n + last.A.cols[k]] = last.A.vals[k];
            }
        }
        factor_spd(coarse_factor_, n);
    }

    void smooth(const CsrMatrix& A, Level& lvl, bool x_is_zero) const {
        for (int s = 0; s < kSweeps; ++s) {
            if (x_is_zero && s == 0) {
                for (std::size_t i = 0; i < lvl.n_free; ++i) {
                    lvl.x[i] = kOmega * lvl.inv_diag[i] * lvl.b[i];
                }
                continue;
            }
            A.multiply(lvl.x.data(), lvl.r.data());
            for (std::size_t i = 0; i < lvl.n_free; ++i) {
                lvl.x[i] += kOmega * lvl.inv_diag[i] * (lvl.b[i] - lvl.r[i]);
            }
        }
    }

    /// Scatters fine residuals to parent coarse nodes (transposed bilinear
    /// interpolation); pinned parents drop their share, matching the
    /// homogeneous data of the correction equation.
    void restrict_to(const Level& fine, Level& coarse) const {
        std::fill(coarse.b.begin(), coarse.b.end(), 0.0);
        for (int iy = 0; iy < fine.ny; ++iy) {
            const int cy = iy >> 1;
            const int oy = iy & 1;
            for (int ix = 0; ix < fine.nx; ++ix) {
                const std::int32_t f =
                    fine.idx[static_cast<std::size_t>(iy) * fine.nx + ix];
                if (f < 0) {
                    continue;
                }
                const double v = fine.r[f];
                const int cx = ix >> 1;
                const int ox = ix & 1;
                for (int ddy = 0; ddy <= oy; ++ddy) {
                    const int py = cy + ddy;
                    if (py >= coarse.ny) {
                        continue;
                    }
                    const double wy = oy != 0 ? 0.5 : 1.0;
                    for (int ddx = 0; ddx <= ox; ++ddx) {
                        const int px = cx + ddx;
                        if (px >= coarse.nx) {
                            continue;
                        }
                        const std::int32_t p =
                            coarse.idx[static_cast<std::size_t>(py) * coarse.nx +
                                       px];
                        if (p >= 0) {
                            const double wx = ox != 0 ? 0.5 : 1.0;
                            coarse.b[p] += wx * wy * v;
                        }
                    }
                }
            }
        }
    }

    void prolong_add(const Level& coarse, Level& fine) const {
        for (int iy = 0; iy < fine.ny; ++iy) {
            const int cy = iy >> 1;
            const int oy = iy & 1;
            for (int ix = 0; ix < fine.nx; ++ix) {
                const std::int32_t f =
                    fine.idx[static_cast<std::size_t>(iy) * fine.nx + ix];
                if (f < 0) {
                    continue;
                }
                const int cx = ix >> 1;
                const int ox = ix & 1;
                double acc = 0.0;
                for (int ddy = 0; ddy <= oy; ++ddy) {
                    const int py = cy + ddy;
                    if (py >= coarse.ny) {
                        continue;
                    }
                    const double wy = oy != 0 ? 0.5 : 1.0;
                    for (int ddx = 0; ddx <= ox; ++ddx) {
                        const int px = cx + ddx;
                        if (px >= coarse.nx) {
                            continue;
                        }
                        const std::int32_t p =
                            coarse.idx[static_cast<std::size_t>(py) * coarse.nx +
                                       px];
                        if (p >= 0) {
                            const double wx = ox != 0 ? 0.5 : 1.0;
                            acc += wx * wy * coarse.x[p];
                        }
                    }
                }
                fine.x[f] += acc;
            }
        }
    }

    void cycle(const CsrMatrix& fine_matrix, std::size_t l) {
        Level& lvl = levels_[l];
        const CsrMatrix& A = l == 0 ? fine_matrix : lvl.A;
        if (l + 1 == levels_.size()) {
            if (coarse_factor_.empty()) {
                smooth(A, lvl, true);
            } else {
                lvl.x = lvl.b;
                solve_spd(coarse_factor_, lvl.n_free, lvl.x);
            }
            return;
        }
        smooth(A, lvl, true);
        A.multiply(lvl.x.data(), lvl.r.data());
        for (std::size_t i = 0; i < lvl.n_free; ++i) {
            lvl.r[i] = lvl.b[i] - lvl.r[i];
        }
        restrict_to(lvl, levels_[l + 1]);
        cycle(fine_matrix, l + 1);
        prolong_add(levels_[l + 1], lvl);
        smooth(A, lvl, false);
    }
};

} // namespace

HalfPlaneSolution solve_halfplane(const PolygonSet& E,
                                  const HalfPlaneOptions& opts) {
    if (!(opts.h > 0.0)) {
        throw config_error("solve_halfplane: grid step must be positive");
    }
    const double h = opts.h;
    const bool disc = opts.closure == HalfPlaneClosure::disc;
    const BoundingBox bb = E.bounds();
    if (bb.y_max > kGeomTol) {
        throw config_error("solve_halfplane: set must lie in the lower half-plane");
    }

    double width;
    int nyu;
    if (disc) {
        if (!(opts.disc_radius > 0.0)) {
            throw config_error("solve_halfplane: disc closure needs a radius");
        }
        for (const auto& loop : E.loops()) {
            for (const Vec2& v : loop) {
                if (std::hypot(v.x, v.y) > opts.disc_radius - 2.0 * h) {
                    throw config_error(
                        "solve_halfplane: set escapes the truncation ball");
                }
            }
        }
        width = opts.disc_radius + 4.0 * h;
        nyu = static_cast<int>(std::ceil(width / h));
    } else {
        width = E.horizontal_extent() + 4.0 * h;
        nyu = 0;
    }
    const int nxh = static_cast<int>(std::ceil(width / h));
    const int nx = 2 * nxh + 1;
    const double depth = std::min(bb.y_min, 0.0);
    const int nyd = static_cast<int>(std::ceil((-depth + 4.0 * h) / h));
    const int ny = nyu + nyd + 1;
    const int line_iy = nyd;

    HalfPlaneSolution sol;
    sol.grid = CartesianGrid{-nxh * h, -nyd * h, h, nx, ny};
    sol.line_iy = line_iy;
    sol.area = E.area();
    const CartesianGrid& grid = sol.grid;

    const std::vector<Segment> edges = E.edges();
    const auto tops = E.top_edge_intervals(kGeomTol);
    const double r2 = opts.disc_radius * opts.disc_radius;

    // Node classification.  Below the line a row-wise scanline marks the
    // strict interior of E; the line row is free on the open top-edge
    // intervals; above the line (disc closure only) inside the open ball.
    std::vector<std::int32_t> idx(grid.n_nodes(), -1);
    std::vector<double> xcross;
    for (int iy = 0; iy < line_iy; ++iy) {
        const double y = grid.y_of(iy);
        xcross.clear();
        for (const Segment& e : edges) {
            if ((e.a.y <= y) != (e.b.y <= y)) {
                xcross.push_back(e.a.x +
                                 (y - e.a.y) / (e.b.y - e.a.y) * (e.b.x - e.a.x));
            }
        }
        std::sort(xcross.begin(), xcross.end());
        for (std::size_t k = 0; k + 1 < xcross.size(); k += 2) {
            const double x_lo = xcross[k] + kGeomTol;
            const double x_hi = xcross[k + 1] - kGeomTol;
            int ix_lo = static_cast<int>(std::floor((x_lo - grid.x0) / h)) + 1;
            int ix_hi = static_cast<int>(std::ceil((x_hi - grid.x0) / h)) - 1;
            ix_lo = std::max(ix_lo, 0);
            ix_hi = std::min(ix_hi, nx - 1);
            for (int ix = ix_lo; ix <= ix_hi; ++ix) {
                idx[grid.id(ix, iy)] = 0;
            }
        }
    }
    for (const auto& interval : tops) {
        const double x_lo = interval[0] + kGeomTol;
        const double x_hi = interval[1] - kGeomTol;
        int ix_lo = static_cast<int>(std::floor((x_lo - grid.x0) / h)) + 1;
        int ix_hi = static_cast<int>(std::ceil((x_hi - grid.x0) / h)) - 1;
        ix_lo = std::max(ix_lo, 0);
        ix_hi = std::min(ix_hi, nx - 1);
        for (int ix = ix_lo; ix <= ix_hi; ++ix) {
            idx[grid.id(ix, line_iy)] = 0;
        }
    }
    if (disc) {
        for (int iy = line_iy + 1; iy < ny; ++iy) {
            const double y = grid.y_of(iy);
            for (int ix = 0; ix < nx; ++ix) {
                const double x = grid.x_of(ix);
                if (x * x + y * y < r2 - kGeomTol) {
                    idx[grid.id(ix, iy)] = 0;
                }
            }
        }
    }

    std::int32_t nf = 0;
    std::vector<std::int32_t> fx, fy;
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            if (idx[grid.id(ix, iy)] == 0) {
                idx[grid.id(ix, iy)] = nf++;
                fx.push_back(ix);
                fy.push_back(iy);
            }
        }
    }
    sol.free_nodes = static_cast<std::size_t>(nf);

    // Assembly.  Conductance 1 per full lattice edge, 1/t per cut edge; the
    // diagonal always carries all four direction conductances, which keeps
    // the matrix a symmetric M-matrix.
    CsrBuilder builder(nf);
    builder.reserve(static_cast<std::size_t>(nf) * 5);
    std::vector<double> rhs(nf, 0.0);
    std::vector<double> diag(nf, 0.0);
    std::vector<double> south_c(nf, 0.0);
    const int dxs[4] = {1, -1, 0, 0};
    const int dys[4] = {0, 0, 1, -1};
    for (std::int32_t r = 0; r < nf; ++r) {
        const int ix = fx[r];
        const int iy = fy[r];
        const double x = grid.x_of(ix);
        const double y = grid.y_of(iy);
        double dsum = 0.0;
        double rr = 0.0;
        for (int d = 0; d < 4; ++d) {
            if (!disc && iy == line_iy && dys[d] == 1) {
                dsum += 1.0; // coupling supplied by the DtN convolution
                continue;
            }
            const int jx = ix + dxs[d];
            const int jy = iy + dys[d];
            const double xn = x + dxs[d] * h;
            const double yn = y + dys[d] * h;
            const std::int32_t nb =
                (jx >= 0 && jx < nx && jy >= 0 && jy < ny)
                    ? idx[grid.id(jx, jy)]
                    : -1;
            const double t_max = nb >= 0 ? 1.0 - 1e-9 : 1.0 + kGeomTol;
            double t_hit = t_max + 1.0;
            if (std::min(y, yn) < kGeomTol && !edges.empty()) {
                t_hit = min_cut(edges, {x, y},
                                {static_cast<double>(dxs[d]) * h,
                                 static_cast<double>(dys[d]) * h},
                                t_max);
            }
            if (t_hit <= t_max) {
                const double tt = std::clamp(t_hit, kCutClip, 1.0);
                const double c = 1.0 / tt;
                dsum += c;
                rr += c * pin_value(y + tt * dys[d] * h);
                continue;
            }
            if (nb >= 0) {
                dsum += 1.0;
                builder.add(r, nb, -1.0);
                if (dys[d] == -1) {
                    south_c[r] = -1.0;
                }
                continue;
            }
            dsum += 1.0;
            rr += pin_value(yn);
        }
        builder.add(r, r, dsum);
        diag[r] = dsum;
        rhs[r] = rr;
    }
    const CsrMatrix A = builder.compress();

    // Column structure for the vertical-tridiagonal preconditioner.
    std::vector<std::vector<std::int32_t>> columns(nx);
    for (std::int32_t r = 0; r < nf; ++r) {
        columns[fx[r]].push_back(r); // bottom-up since ids are row-major
    }

    std::vector<std::pair<std::int32_t, std::int32_t>> line_nodes;
    for (int ix = 0; ix < nx; ++ix) {
        const std::int32_t id = idx[grid.id(ix, line_iy)];
        if (id >= 0) {
            line_nodes.emplace_back(ix, id);
        }
    }

    std::vector<double> solution(nf, 0.0);
    CgResult cg;
    if (nf > 0) {
        std::unique_ptr<DtnConvolution> dtn_conv;
        if (!disc) {
            dtn_conv = std::make_unique<DtnConvolution>(nx);
        }
        // The column-tridiagonal preconditioner wins on the shallow slabs of
        // the DtN closure; the big truncated discs need the mesh-independent
        // iteration counts of the multigrid cycle.
        std::unique_ptr<MgPreconditioner> mg;
        if (disc && nf > 20000) {
            mg = std::make_unique<MgPreconditioner>(
                nx, ny, std::vector<std::int32_t>(idx), A, diag);
        }
        const LinearOp apply = [&](const double* v, double* out) {
            A.multiply(v, out);
            if (dtn_conv) {
                std::fill(dtn_conv->rin, dtn_conv->rin + dtn_conv->nfft, 0.0);
                for (const auto& [ix, id] : line_nodes) {
                    dtn_conv->rin[ix] = v[id];
                }
                dtn_conv->run();
                for (const auto& [ix, id] : line_nodes) {
                    out[id] -= dtn_conv->rout[ix];
                }
            }
        };
        std::vector<double> td, tl, tu, tr;
        const LinearOp mg_precond = [&](const double* r_in, double* z_out) {
            mg->apply(A, r_in, z_out);
        };
        const LinearOp tridiag_precond = [&](const double* r_in, double* z_out) {
            for (int ix = 0; ix < nx; ++ix) {
                const auto& col = columns[ix];
                const std::size_t m = col.size();
                if (m == 0) {
                    continue;
                }
                td.resize(m);
                tl.resize(m);
                tu.resize(m);
                tr.resize(m);
                for (std::size_t k = 0; k < m; ++k) {
                    td[k] = diag[col[k]];
                    tr[k] = r_in[col[k]];
                    // Entry k couples to k-1 iff they are grid-adjacent and
                    // the south edge of the upper node is uncut.
                    tl[k] = (k > 0 && fy[col[k]] == fy[col[k - 1]] + 1)
                                ? south_c[col[k]]
                                : 0.0;
                    tu[k] = 0.0;
                }
                for (std::size_t k = 0; k + 1 < m; ++k) {
                    tu[k] = tl[k + 1];
                }
                solve_tridiagonal(td, tl, tu, tr);
                for (std::size_t k = 0; k < m; ++k) {
                    z_out[col[k]] = tr[k];
                }
            }
        };
        cg = conjugate_gradient(apply, mg ? mg_precond : tridiag_precond, rhs,
                                solution, opts.cg_tol, opts.cg_max_iter);
        if (!cg.converged && cg.iterations > 0) {
            throw convergence_error("solve_halfplane: conjugate gradient stalled at residual " +
                                    std::to_string(cg.residual_norm));
        }
    } else {
        cg.converged = true;
    }
    sol.cg_iterations = cg.iterations;
    sol.converged = cg.converged;

    sol.line_values.assign(nx, 0.0);
    for (const auto& [ix, id] : line_nodes) {
        sol.line_values[ix] = solution[id];
    }
    double acc = 0.0;
    for (double v : sol.line_values) {
        acc += v;
    }
    sol.line_integral = h * acc;
    sol.F = sol.area - sol.line_integral;

    if (opts.keep_field) {
        sol.field.assign(grid.n_nodes(), 0.0);
        for (int iy = 0; iy < ny; ++iy) {
            const double y = grid.y_of(iy);
            for (int ix = 0; ix < nx; ++ix) {
                const std::int32_t id = idx[grid.id(ix, iy)];
                sol.field[grid.id(ix, iy)] =
                    id >= 0 ? solution[id] : pin_value(y);
            }
        }
    }
    return sol;
}

} // namespace conelab
