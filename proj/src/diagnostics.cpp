#include "conelab/diagnostics.hpp"

#include "conelab/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <utility>

namespace conelab {

namespace {

struct Corner {
    double r;
    double theta;
    double f;
};

using PointKey = std::array<long long, 2>;
using SegKey = std::array<long long, 4>;

PointKey point_key(const ConePoint& p) {
    return {static_cast<long long>(std::llround(p.r * 1e9)),
            static_cast<long long>(std::llround(p.theta * 1e9))};
}

ConePoint edge_crossing(Corner a, Corner b) {
    if (!(a.f > 0.0)) {
        std::swap(a, b);
    }
    const double t = a.f / (a.f - b.f);
    return ConePoint{a.r + t * (b.r - a.r), a.theta + t * (b.theta - a.theta)};
}

/// Emits the zero-contour segments of the phase mask {f > 0} over one cell
/// whose corners are given in the cyclic order S0, S1, E1, N0 (i.e. (i,j),
/// (i,j+1), (i+1,j+1), (i+1,j)).
void cell_segments(const std::array<Corner, 4>& c,
                   std::vector<std::pair<ConePoint, ConePoint>>& segs) {
    // Edges in cyclic order: 0: c0-c1, 1: c1-c2, 2: c2-c3, 3: c3-c0.
    std::array<ConePoint, 4> pts;
    std::array<int, 4> crossed{};
    int n = 0;
    for (int e = 0; e < 4; ++e) {
        const Corner& a = c[e];
        const Corner& b = c[(e + 1) % 4];
        if ((a.f > 0.0) != (b.f > 0.0)) {
            pts[n] = edge_crossing(a, b);
            crossed[n] = e;
            ++n;
        }
    }
    if (n == 2) {
        segs.emplace_back(pts[0], pts[1]);
    } else if (n == 4) {
        // Saddle: pair crossings on adjacent edge pairs (0,3) and (1,2) so
        // the two segments separate the diagonal phases consistently.
        int first_partner = -1, rest_a = -1, rest_b = -1;
        for (int k = 1; k < 4; ++k) {
            if ((crossed[0] == 0 && crossed[k] == 3) ||
                (crossed[0] == 3 && crossed[k] == 0)) {
                first_partner = k;
            }
        }
        if (first_partner < 0) {
            first_partner = 1;
        }
        for (int k = 1; k < 4; ++k) {
            if (k == first_partner) {
                continue;
            }
            (rest_a < 0 ? rest_a : rest_b) = k;
        }
        segs.emplace_back(pts[0], pts[first_partner]);
        segs.emplace_back(pts[rest_a], pts[rest_b]);
    }
}

void collect_mask_segments(const ScalarField& u, double sign,
                           std::vector<std::pair<ConePoint, ConePoint>>& segs) {
    const PolarGrid& g = u.grid;
    const double dr = g.dr();
    const double dt = g.dtheta();
    for (int i = 0; i < g.n_r; ++i) {
        for (int j = 0; j < g.n_theta; ++j) {
            const double r0 = dr * i;
            const double r1 = dr * (i + 1);
            const double t0 = dt * j;
            const double t1 = dt * (j + 1); // raw, so seam cells stay local
            const std::array<Corner, 4> c = {
                Corner{r0, t0, sign * u.values[g.id(i, j)]},
                Corner{r0, t1, sign * u.values[g.id(i, j + 1)]},
                Corner{r1, t1, sign * u.values[g.id(i + 1, j + 1)]},
                Corner{r1, t0, sign * u.values[g.id(i + 1, j)]},
            };
            cell_segments(c, segs);
        }
    }
}

} // namespace

FreeBoundary extract_free_boundary(const ScalarField& u) {
    const PolarGrid& g = u.grid;
    std::vector<std::pair<ConePoint, ConePoint>> raw;
    collect_mask_segments(u, +1.0, raw);
    collect_mask_segments(u, -1.0, raw);

    // Deduplicate (the +/- passes see the same two-phase interfaces).
    std::set<SegKey> seen;
    std::vector<std::pair<ConePoint, ConePoint>> segs;
    for (const auto& s : raw) {
        PointKey ka = point_key(s.first);
        PointKey kb = point_key(s.second);
        if (ka == kb) {
            continue; // degenerate (contour pinched at a node)
        }
        SegKey key = ka < kb ? SegKey{ka[0], ka[1], kb[0], kb[1]}
                             : SegKey{kb[0], kb[1], ka[0], ka[1]};
        if (seen.insert(key).second) {
            segs.push_back(s);
        }
    }

    FreeBoundary fb;
    if (u.vertex() == 0.0) {
        bool pos = false, neg = false;
        for (int j = 0; j < g.n_theta; ++j) {
            const double v = u.values[g.id(1, j)];
            pos = pos || v > 0.0;
            neg = neg || v < 0.0;
        }
        if (pos && neg) {
            fb.vertex_distance = 0.0;
        }
    }

    if (segs.empty()) {
        return fb;
    }

    // Stitch segments into polylines by shared endpoints.
    std::map<PointKey, std::vector<std::size_t>> at;
    for (std::size_t k = 0; k < segs.size(); ++k) {
        at[point_key(segs[k].first)].push_back(k);
        at[point_key(segs[k].second)].push_back(k);
    }
    std::vector<bool> used(segs.size(), false);
    auto walk = [&](std::size_t start, bool from_first) {
        std::vector<ConePoint> line;
        std::size_t k = start;
        ConePoint head = from_first ? segs[k].first : segs[k].second;
        ConePoint tail = from_first ? segs[k].second : segs[k].first;
        line.push_back(head);
        line.push_back(tail);
        used[k] = true;
        while (true) {
            const auto it = at.find(point_key(tail));
            std::size_t next = segs.size();
            for (std::size_t cand : it->second) {
                if (!used[cand]) {
                    next = cand;
                    break;
                }
            }
            if (next == segs.size()) {
                break;
            }
            used[next] = true;
            tail = point_key(segs[next].first) == point_key(tail)
                       ? segs[next].second
                       : segs[next].first;
            line.push_back(tail);
        }
        return line;
    };
    // Open chains first (endpoints of degree 1), then remaining cycles.
    for (std::size_t k = 0; k < segs.size(); ++k) {
        if (used[k]) {
            continue;
        }
        const bool first_open = at[point_key(segs[k].first)].size() == 1;
        const bool second_open = at[point_key(segs[k].second)].size() == 1;
        if (first_open || second_open) {
            fb.polylines.push_back(walk(k, first_open));
        }
    }
    for (std::size_t k = 0; k < segs.size(); ++k) {
        if (!used[k]) {
            fb.polylines.push_back(walk(k, true));
        }
    }

    for (const auto& line : fb.polylines) {
        for (const ConePoint& p : line) {
            fb.vertex_distance = std::min(fb.vertex_distance, p.r);
        }
    }
    return fb;
}

bool passes_through_vertex(const ScalarField& u, const FreeBoundary& fb) {
    if (fb.vertex_distance == 0.0) {
        return true;
    }
    return fb.vertex_distance <= u.grid.dr() * (1.0 + 1e-12);
}

FluxJump flux_jump_check(const ScalarField& u, const ConePoint& fb_point,
                         double probe_radius, double lambda_plus,
                         double lambda_minus) {
    const PolarGrid& g = u.grid;
    const double r = fb_point.r;
    const double theta = fb_point.theta;
    if (!(probe_radius > 0.0)) {
        throw config_error("flux_jump_check: probe radius must be positive");
    }
    if (r <= 4.0 * probe_radius || g.R - r <= 4.0 * probe_radius) {
        throw config_error(
            "flux_jump_check: point too close to the vertex or outer boundary");
    }

    const double s = probe_radius / 10.0;
    const double g_r =
        (u.interpolate(r + s, theta) - u.interpolate(r - s, theta)) / (2.0 * s);
    const double g_t =
        (u.interpolate(r, theta + s / r) - u.interpolate(r, theta - s / r)) /
        (2.0 * s);
    const double norm = std::hypot(g_r, g_t);
    if (norm < 1e-14) {
        throw config_error("flux_jump_check: vanishing gradient at probe point");
    }
    const double nr = g_r / norm;
    const double nt = g_t / norm;

    // Sample along the normal in the local flat chart around the point.
    auto probe = [&](double dist) {
        const double x = r + dist * nr;
        const double y = dist * nt;
        return u.interpolate(std::hypot(x, y), theta + std::atan2(y, x));
    };
    const double d = probe_radius / 3.0;
    const double up1 = probe(d), up2 = probe(2.0 * d), up3 = probe(3.0 * d);
    const double wn1 = probe(-d), wn2 = probe(-2.0 * d), wn3 = probe(-3.0 * d);
    const double window_tol = 1e-9 * (1.0 + std::abs(up3) + std::abs(wn3));
    if (up1 < -window_tol || up2 < -window_tol || up3 < -window_tol ||
        wn1 > window_tol || wn2 > window_tol || wn3 > window_tol) {
        throw config_error("flux_jump_check: probe window is not one-phase");
    }

    auto one_sided_slope = [d](double v1, double v2, double v3) {
        const double curv = (v3 - 2.0 * v2 + v1) / (2.0 * d * d);
        return (v2 - v1) / d - 3.0 * curv * d;
    };
    FluxJump out;
    out.grad_plus = one_sided_slope(up1, up2, up3);
    out.grad_minus = one_sided_slope(-wn1, -wn2, -wn3);
    out.measured = out.grad_plus * out.grad_plus - out.grad_minus * out.grad_minus;
    out.target = lambda_plus * lambda_plus - lambda_minus * lambda_minus;
    return out;
}

ScalarField blow_up_rescale(const ScalarField& u, double rho) {
    const PolarGrid& g = u.grid;
    if (!(rho > 0.0) || rho > 1.0) {
        throw config_error("blow_up_rescale: rho must lie in (0, 1]");
    }
    if (rho * g.n_r < 8.0 - 1e-12) {
        throw config_error("blow_up_rescale: rho leaves fewer than 8 rings");
    }
    ScalarField out(g);
    out.values[0] = u.vertex() / rho;
    for (int i = 1; i <= g.n_r; ++i) {
        for (int j = 0; j < g.n_theta; ++j) {
            out.values[g.id(i, j)] =
                u.interpolate(rho * g.r_of(i), g.theta_of(j)) / rho;
        }
    }
    return out;
}

RegularityReport regularity_scan(const ScalarField& u, double beta) {
    const PolarGrid& g = u.grid;
    RegularityReport report;
    report.holder_beta =
        beta > 0.0 ? beta : 0.5 * std::min(1.0, g.cone.holder_exponent());

    const double dr = g.dr();
    const double dt = g.dtheta();
    std::map<int, double> sup_by_bucket;
    for (int i = 0; i < g.n_r; ++i) {
        const double r_mid = 0.5 * (g.r_of(i) + g.r_of(i + 1));
        const int bucket =
            static_cast<int>(std::floor(std::log2(g.R / r_mid)));
        const double r_inner = g.R / std::pow(2.0, bucket + 1);
        if (r_inner < 2.0 * dr) {
            continue;
        }
        for (int j = 0; j < g.n_theta; ++j) {
            const double u00 = u.values[g.id(i, j)];
            const double u01 = u.values[g.id(i, j + 1)];
            const double u10 = u.values[g.id(i + 1, j)];
            const double u11 = u.values[g.id(i + 1, j + 1)];
            const double du_r = 0.5 * ((u10 - u00) + (u11 - u01)) / dr;
            const double du_t = 0.5 * ((u01 - u00) + (u11 - u10)) / (r_mid * dt);
            const double mag = std::hypot(du_r, du_t);
            auto [it, inserted] = sup_by_bucket.try_emplace(bucket, mag);
            if (!inserted) {
                it->second = std::max(it->second, mag);
            }
        }
    }
    for (const auto& [bucket, sup] : sup_by_bucket) {
        report.annuli.push_back({g.R / std::pow(2.0, bucket + 1), sup});
    }

    // Log-log least squares for the growth exponent.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (const AnnulusRow& row : report.annuli) {
        if (row.sup_grad <= 0.0) {
            continue;
        }
        const double x = std::log(row.r_inner);
        const double y = std::log(row.sup_grad);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    if (count >= 2) {
        report.fitted_exponent =
            (count * sxy - sx * sy) / (count * sxx - sx * sx);
    }

    // Hoelder quotient over a deterministic node subsample (vertex included
    // so the scan sees the conical point).
    std::vector<std::size_t> sample{g.vertex_id()};
    const int si = std::max(1, g.n_r / 8);
    const int sj = std::max(1, g.n_theta / 16);
    for (int i = si; i <= g.n_r; i += si) {
        for (int j = 0; j < g.n_theta; j += sj) {
            sample.push_back(g.id(i, j));
        }
    }
    for (std::size_t a = 0; a < sample.size(); ++a) {
        for (std::size_t b = a + 1; b < sample.size(); ++b) {
            const ConePoint pa{g.r_of(g.ring_of(sample[a])),
                               g.theta_of(g.angle_of(sample[a]))};
            const ConePoint pb{g.r_of(g.ring_of(sample[b])),
                               g.theta_of(g.angle_of(sample[b]))};
            const double dist = geodesic_distance(pa, pb, g.cone).distance;
            if (dist < 1e-14) {
                continue;
            }
            const double q =
                std::abs(u.values[sample[a]] - u.values[sample[b]]) /
                std::pow(dist, report.holder_beta);
            report.holder_quotient = std::max(report.holder_quotient, q);
        }
    }

    report.lipschitz_certified = g.cone.length <= 2.0 * std::numbers::pi + 1e-12 &&
                                 report.annuli.size() >= 2 &&
                                 report.fitted_exponent > -0.1;
    return report;
}

BarrierProfile barrier_radius(double delta, double eps, double lambda_plus,
                              BarrierVariant variant) {
    if (!(delta > 0.0) || !(eps > 0.0) || !(lambda_plus > 0.0)) {
        throw config_error("barrier_radius: delta, eps, lambda_+ must be positive");
    }
    auto bisect = [](auto f, double lo, double hi) {
        // f(lo) and f(hi) must straddle zero; 200 halvings reach machine
        // precision for any sane bracket.
        double flo = f(lo);
        for (int it = 0; it < 200 && hi - lo > 1e-16 * (1.0 + hi); ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = f(mid);
            if ((fm > 0.0) == (flo > 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        return 0.5 * (lo + hi);
    };

    double r0 = 0.0;
    if (variant == BarrierVariant::corrected) {
        const double fmax = lambda_plus * eps / std::numbers::e;
        if (delta > fmax) {
            throw config_error("barrier_radius: no root (delta exceeds lambda_+ eps / e)");
        }
        auto f = [&](double r) {
            return lambda_plus * r * std::log(eps / r) - delta;
        };
        r0 = delta == fmax ? eps / std::numbers::e
                           : bisect(f, eps / std::numbers::e, eps);
    } else {
        auto f = [&](double r) {
            return lambda_plus * r * std::log(r / eps) - delta;
        };
        double hi = 2.0 * eps;
        while (f(hi) < 0.0) {
            hi *= 2.0;
        }
        r0 = bisect(f, eps, hi);
    }
    return BarrierProfile{r0, lambda_plus};
}

} // namespace conelab
