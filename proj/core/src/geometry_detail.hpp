#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "lpkit/cube_geometry.hpp"

namespace lpkit::detail {

using i128 = wide_int;
using IBox = OpenSetMask::IBox;

inline i128 box_volume(const IBox& b, int n) {
    i128 v = 1;
    for (int a = 0; a < n; ++a) v *= static_cast<i128>(b.hi[a] - b.lo[a]);
    return v;
}

inline IBox scaled(const IBox& b, std::int64_t s, int n) {
    IBox r = b;
    for (int a = 0; a < n; ++a) {
        r.lo[a] *= s;
        r.hi[a] *= s;
    }
    return r;
}

inline IBox shifted(const IBox& b, std::int64_t dx, std::int64_t dy) {
    IBox r = b;
    r.lo[0] += dx;
    r.hi[0] += dx;
    r.lo[1] += dy;
    r.hi[1] += dy;
    return r;
}

inline i128 box_dist2(const IBox& a, const IBox& b, int n) {
    i128 s = 0;
    for (int k = 0; k < n; ++k) {
        const i128 g = std::max<i128>({0, static_cast<i128>(a.lo[k]) - b.hi[k], static_cast<i128>(b.lo[k]) - a.hi[k]});
        s += g * g;
    }
    return s;
}

inline i128 box_max_dist2(const IBox& a, const IBox& b, int n) {
    i128 s = 0;
    for (int k = 0; k < n; ++k) {
        const i128 g = std::max<i128>(static_cast<i128>(a.hi[k]) - b.lo[k], static_cast<i128>(b.hi[k]) - a.lo[k]);
        s += g * g;
    }
    return s;
}

inline i128 overlap_volume(const IBox& a, const IBox& b, int n) {
    i128 v = 1;
    for (int k = 0; k < n; ++k) {
        const std::int64_t w = std::min(a.hi[k], b.hi[k]) - std::max(a.lo[k], b.lo[k]);
        if (w <= 0) return 0;
        v *= w;
    }
    return v;
}

inline i128 point_box_min_dist2(const std::array<i128, 2>& p, const IBox& b, int n) {
    i128 s = 0;
    for (int k = 0; k < n; ++k) {
        const i128 g = std::max<i128>({0, b.lo[k] - p[k], p[k] - b.hi[k]});
        s += g * g;
    }
    return s;
}

inline i128 point_box_max_dist2(const std::array<i128, 2>& p, const IBox& b, int n) {
    i128 s = 0;
    for (int k = 0; k < n; ++k) {
        const i128 g = std::max<i128>(p[k] - b.lo[k], b.hi[k] - p[k]);
        s += g * g;
    }
    return s;
}

inline int sign_of(i128 x) { return (x > 0) - (x < 0); }

/// Sign of a + b sqrt(n) for n in {1, 2}, exact. |a|, |b| must stay below 2^62.
inline int sign_a_plus_b_sqrtn(int n, i128 a, i128 b) {
    if (n == 1) return sign_of(a + b);
    const int sa = sign_of(a), sb = sign_of(b);
    if (sa == 0) return sb;
    if (sb == 0 || sa == sb) return sa;
    // Opposite signs: compare a^2 with n b^2.
    const i128 lhs = a * a, rhs = static_cast<i128>(n) * b * b;
    if (lhs == rhs) return 0;
    return lhs > rhs ? sa : sb;
}

struct BoxPair {
    std::size_t a;
    std::size_t b;
    bool overlap;  // interiors intersect
};

/// All pairs a < b whose closed boxes intersect, periodic images included.
inline std::vector<BoxPair> touching_pairs(const std::vector<IBox>& boxes, int n, bool periodic, std::int64_t period) {
    struct Img {
        IBox box;
        std::size_t id;
        bool base;
    };
    std::vector<Img> imgs;
    const int r0 = periodic ? 1 : 0;
    const int r1 = periodic && n == 2 ? 1 : 0;
    for (std::size_t i = 0; i < boxes.size(); ++i)
        for (int u = -r0; u <= r0; ++u)
            for (int v = -r1; v <= r1; ++v) imgs.push_back({shifted(boxes[i], u * period, v * period), i, u == 0 && v == 0});
    std::sort(imgs.begin(), imgs.end(), [](const Img& x, const Img& y) { return x.box.lo[0] < y.box.lo[0]; });

    std::set<std::pair<std::size_t, std::size_t>> seen;
    std::vector<BoxPair> out;
    for (std::size_t i = 0; i < imgs.size(); ++i) {
        for (std::size_t j = i + 1; j < imgs.size() && imgs[j].box.lo[0] <= imgs[i].box.hi[0]; ++j) {
            const Img& x = imgs[i];
            const Img& y = imgs[j];
            if (x.id == y.id || !(x.base || y.base)) continue;
            if (n == 2 && (x.box.lo[1] > y.box.hi[1] || y.box.lo[1] > x.box.hi[1])) continue;
            const auto key = std::minmax(x.id, y.id);
            const bool ov = overlap_volume(x.box, y.box, n) > 0;
            if (!seen.insert(key).second) {
                if (ov)
                    for (auto& p : out)
                        if (p.a == key.first && p.b == key.second) p.overlap = true;
                continue;
            }
            out.push_back({key.first, key.second, ov});
        }
    }
    std::sort(out.begin(), out.end(), [](const BoxPair& x, const BoxPair& y) {
        return std::make_pair(x.a, x.b) < std::make_pair(y.a, y.b);
    });
    return out;
}

/// Largest number of closed boxes sharing a common point, periodic images included.
inline std::size_t max_coverage(const std::vector<IBox>& boxes, int n, bool periodic, std::int64_t period) {
    std::vector<IBox> imgs;
    const int r0 = periodic ? 1 : 0;
    const int r1 = periodic && n == 2 ? 1 : 0;
    for (const auto& b : boxes)
        for (int u = -r0; u <= r0; ++u)
            for (int v = -r1; v <= r1; ++v) imgs.push_back(shifted(b, u * period, v * period));

    // Events at equal x: openings before closings, since boxes are closed.
    struct Event {
        std::int64_t x;
        int type;  // 0 open, 1 close
        std::size_t id;
    };
    std::vector<Event> ev;
    for (std::size_t i = 0; i < imgs.size(); ++i) {
        ev.push_back({imgs[i].lo[0], 0, i});
        ev.push_back({imgs[i].hi[0], 1, i});
    }
    std::sort(ev.begin(), ev.end(), [](const Event& a, const Event& b) {
        return a.x != b.x ? a.x < b.x : a.type < b.type;
    });

    if (n == 1) {
        long cur = 0, best = 0;
        for (const auto& e : ev) {
            cur += e.type == 0 ? 1 : -1;
            best = std::max(best, cur);
        }
        return static_cast<std::size_t>(best);
    }

    std::vector<std::int64_t> ys;
    for (const auto& b : imgs) {
        ys.push_back(b.lo[1]);
        ys.push_back(b.hi[1]);
    }
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    const std::size_t m = ys.size();
    std::vector<long> mx(4 * m, 0), lazy(4 * m, 0);
    auto update = [&](auto&& self, std::size_t node, std::size_t lo, std::size_t hi, std::size_t l, std::size_t r,
                      long d) -> void {
        if (r < lo || hi < l) return;
        if (l <= lo && hi <= r) {
            mx[node] += d;
            lazy[node] += d;
            return;
        }
        const std::size_t mid = (lo + hi) / 2;
        self(self, 2 * node, lo, mid, l, r, d);
        self(self, 2 * node + 1, mid + 1, hi, l, r, d);
        mx[node] = lazy[node] + std::max(mx[2 * node], mx[2 * node + 1]);
    };
    auto idx = [&](std::int64_t y) {
        return static_cast<std::size_t>(std::lower_bound(ys.begin(), ys.end(), y) - ys.begin());
    };
    long best = 0;
    for (const auto& e : ev) {
        const auto& b = imgs[e.id];
        update(update, 1, 0, m - 1, idx(b.lo[1]), idx(b.hi[1]), e.type == 0 ? 1 : -1);
        if (e.type == 0) best = std::max(best, mx[1]);
    }
    return static_cast<std::size_t>(best);
}

}  // namespace lpkit::detail
