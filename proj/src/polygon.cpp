#include "conelab/polygon.hpp"

#include "conelab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace conelab {

double signed_area(const std::vector<Vec2>& loop) {
    double twice = 0.0;
    const std::size_t n = loop.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = loop[i];
        const Vec2& q = loop[(i + 1) % n];
        twice += p.x * q.y - q.x * p.y;
    }
    return 0.5 * twice;
}

void PolygonSet::add_loop(std::vector<Vec2> loop) {
    std::vector<Vec2> clean;
    clean.reserve(loop.size());
    for (const Vec2& p : loop) {
        if (clean.empty() || std::abs(p.x - clean.back().x) > 1e-14 ||
            std::abs(p.y - clean.back().y) > 1e-14) {
            clean.push_back(p);
        }
    }
    while (clean.size() > 1 && std::abs(clean.front().x - clean.back().x) <= 1e-14 &&
           std::abs(clean.front().y - clean.back().y) <= 1e-14) {
        clean.pop_back();
    }
    if (clean.size() < 3) {
        return; // degenerate sliver: contributes no area, no edges
    }
    if (signed_area(clean) < 0.0) {
        std::reverse(clean.begin(), clean.end());
    }
    loops_.push_back(std::move(clean));
}

PolygonSet PolygonSet::from_loop(std::vector<Vec2> loop) {
    PolygonSet out;
    out.add_loop(std::move(loop));
    return out;
}

double PolygonSet::area() const {
    double total = 0.0;
    for (const auto& loop : loops_) {
        total += signed_area(loop);
    }
    return total;
}

BoundingBox PolygonSet::bounds() const {
    BoundingBox b;
    if (loops_.empty()) {
        return b;
    }
    b.x_min = b.x_max = loops_[0][0].x;
    b.y_min = b.y_max = loops_[0][0].y;
    for (const auto& loop : loops_) {
        for (const Vec2& p : loop) {
            b.x_min = std::min(b.x_min, p.x);
            b.x_max = std::max(b.x_max, p.x);
            b.y_min = std::min(b.y_min, p.y);
            b.y_max = std::max(b.y_max, p.y);
        }
    }
    return b;
}

double PolygonSet::horizontal_extent() const {
    if (loops_.empty()) {
        return 0.0;
    }
    const BoundingBox b = bounds();
    return std::max(std::abs(b.x_min), std::abs(b.x_max));
}

namespace {

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    double t = 0.0;
    if (len2 > 0.0) {
        t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
    }
    const double ex = p.x - (a.x + t * dx);
    const double ey = p.y - (a.y + t * dy);
    return std::hypot(ex, ey);
}

} // namespace

bool PolygonSet::contains(Vec2 p, double boundary_tol) const {
    int crossings = 0;
    for (const auto& loop : loops_) {
        const std::size_t n = loop.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2& a = loop[i];
            const Vec2& b = loop[(i + 1) % n];
            if (point_segment_distance(p, a, b) <= boundary_tol) {
                return false;
            }
            // Upward-crossing ray cast along +x.
            if ((a.y <= p.y) != (b.y <= p.y)) {
                const double x_at = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if (x_at > p.x) {
                    ++crossings;
                }
            }
        }
    }
    return (crossings % 2) == 1;
}

PolygonSet PolygonSet::translated(double dx, double dy) const {
    PolygonSet out;
    for (const auto& loop : loops_) {
        std::vector<Vec2> moved;
        moved.reserve(loop.size());
        for (const Vec2& p : loop) {
            moved.push_back({p.x + dx, p.y + dy});
        }
        out.loops_.push_back(std::move(moved));
    }
    return out;
}

PolygonSet PolygonSet::scaled(double t) const {
    if (t <= 0.0) {
        throw config_error("PolygonSet::scaled: factor must be positive");
    }
    PolygonSet out;
    for (const auto& loop : loops_) {
        std::vector<Vec2> s;
        s.reserve(loop.size());
        for (const Vec2& p : loop) {
            s.push_back({t * p.x, t * p.y});
        }
        out.loops_.push_back(std::move(s));
    }
    return out;
}

PolygonSet PolygonSet::clipped(const HalfPlane& hp) const {
    PolygonSet out;
    for (const auto& loop : loops_) {
        std::vector<Vec2> kept;
        const std::size_t n = loop.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2& cur = loop[i];
            const Vec2& nxt = loop[(i + 1) % n];
            const bool cur_in = hp.keeps(cur);
            const bool nxt_in = hp.keeps(nxt);
            if (cur_in) {
                kept.push_back(cur);
            }
            if (cur_in != nxt_in) {
                const double fc = hp.nx * cur.x + hp.ny * cur.y - hp.c;
                const double fn = hp.nx * nxt.x + hp.ny * nxt.y - hp.c;
                const double t = fc / (fc - fn);
                kept.push_back({cur.x + t * (nxt.x - cur.x), cur.y + t * (nxt.y - cur.y)});
            }
        }
        out.add_loop(std::move(kept));
    }
    return out;
}

PolygonSet PolygonSet::clipped(const std::vector<HalfPlane>& window) const {
    PolygonSet out = *this;
    for (const HalfPlane& hp : window) {
        out = out.clipped(hp);
    }
    return out;
}

std::vector<Segment> PolygonSet::edges() const {
    std::vector<Segment> out;
    for (const auto& loop : loops_) {
        const std::size_t n = loop.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2& a = loop[i];
            const Vec2& b = loop[(i + 1) % n];
            if (std::abs(a.x - b.x) > 1e-14 || std::abs(a.y - b.y) > 1e-14) {
                out.push_back({a, b});
            }
        }
    }
    return out;
}

std::vector<std::array<double, 2>> PolygonSet::top_edge_intervals(double tol) const {
    std::vector<std::array<double, 2>> raw;
    for (const Segment& s : edges()) {
        // CCW orientation puts the interior below exactly the edges that
        // run right to left, so bottom edges of above-line loops drop out.
        if (std::abs(s.a.y) <= tol && std::abs(s.b.y) <= tol && s.a.x > s.b.x) {
            raw.push_back({s.b.x, s.a.x});
        }
    }
    std::sort(raw.begin(), raw.end());
    std::vector<std::array<double, 2>> merged;
    for (const auto& iv : raw) {
        if (!merged.empty() && iv[0] <= merged.back()[1] + tol) {
            merged.back()[1] = std::max(merged.back()[1], iv[1]);
        } else {
            merged.push_back(iv);
        }
    }
    return merged;
}

double PolygonSet::symmetry_defect_x() const {
    // Mirror every vertex and measure its distance to the nearest vertex of
    // the set; exact symmetry makes every mirrored vertex land on a vertex.
    double worst = 0.0;
    std::vector<Vec2> all;
    for (const auto& loop : loops_) {
        all.insert(all.end(), loop.begin(), loop.end());
    }
    for (const Vec2& p : all) {
        const Vec2 m{-p.x, p.y};
        double best = std::numeric_limits<double>::infinity();
        for (const Vec2& q : all) {
            best = std::min(best, std::hypot(m.x - q.x, m.y - q.y));
        }
        worst = std::max(worst, best);
    }
    return loops_.empty() ? 0.0 : worst;
}

double monte_carlo_area(const PolygonSet& set, std::size_t samples, std::uint64_t seed) {
    if (set.empty() || samples == 0) {
        return 0.0;
    }
    const BoundingBox b = set.bounds();
    const double w = b.x_max - b.x_min;
    const double h = b.y_max - b.y_min;
    if (w <= 0.0 || h <= 0.0) {
        return 0.0;
    }
    std::mt19937_64 rng(seed);
    auto unit = [&rng]() { return (rng() >> 11) * 0x1.0p-53; };
    std::size_t hits = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        const Vec2 p{b.x_min + w * unit(), b.y_min + h * unit()};
        if (set.contains(p, 0.0)) {
            ++hits;
        }
    }
    return w * h * static_cast<double>(hits) / static_cast<double>(samples);
}

} // namespace conelab
