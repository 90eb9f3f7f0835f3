/**
 * @file packing.cpp
 * @brief Sampled upper bound and branch-and-bound lower bound for the
 *        minimal ball density of the self-conformal measure.
 */

#include "packdim/packing.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <queue>
#include <stdexcept>
#include <thread>

#include "packdim/dimension.hpp"

namespace packdim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Longest branch inverse chain kept per center. Reaching radii below
/// (1/2)^72 of the hull is outside any configured radius grid.
constexpr int kMaxChain = 80;

// Radii below this cannot be pulled back through a chain map without the
// endpoint rounding error becoming a visible fraction of the window.
constexpr double kMinSampleRadius = 1e-9;

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("PACKDIM_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 1;
}

void atomic_min(std::atomic<double>& target, double value) {
    double cur = target.load(std::memory_order_relaxed);
    while (value < cur &&
           !target.compare_exchange_weak(cur, value, std::memory_order_relaxed)) {
    }
}

/// Running minimum with a total (density, center, radius) order, so merges
/// are independent of evaluation order.
struct BestPair {
    double d = kInf;
    double c = 0.0;
    double r = 0.0;

    void offer(double dd, double cc, double rr) {
        if (dd < d || (dd == d && (cc < c || (cc == c && rr < r)))) {
            d = dd;
            c = cc;
            r = rr;
        }
    }
};

void candidate_rec(const IfsSystem& s, const LinearMap& m, int depth_left, bool root,
                   double hull_left, double hull_right, std::vector<double>& out) {
    out.push_back(m(hull_left));
    out.push_back(m(hull_right));
    if (!root) out.push_back(m.intercept / (1.0 - m.slope));
    if (depth_left == 0) return;
    for (int k = 1; k <= s.n; ++k) {
        candidate_rec(s, m.compose(s.branch(k)), depth_left - 1, false, hull_left,
                      hull_right, out);
    }
}

}  // namespace

std::vector<double> candidate_centers(const IfsSystem& s, int generation,
                                      std::uint64_t cap) {
    if (generation < 0) {
        throw std::invalid_argument("candidate_centers: generation must be nonnegative");
    }
    std::uint64_t words = 1;
    std::uint64_t level = 1;
    for (int l = 1; l <= generation; ++l) {
        const auto n = static_cast<std::uint64_t>(s.n);
        if (level > cap / n) {
            throw std::runtime_error("candidate_centers: word count exceeds cap");
        }
        level *= n;
        words += level;
        if (words > cap) {
            throw std::runtime_error("candidate_centers: word count exceeds cap");
        }
    }
    std::vector<double> out;
    out.reserve(3 * static_cast<std::size_t>(words));
    candidate_rec(s, LinearMap{}, generation, true, leftmost_point(s),
                  rightmost_point(s), out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

DminSample dmin_sampled(const IfsSystem& s, double h, const SearchOptions& opt) {
    if (s.n < 2) {
        throw std::invalid_argument("dmin_sampled: n must be at least 2");
    }
    if (opt.radii_per_center < 2) {
        throw std::invalid_argument("dmin_sampled: radii_per_center must be at least 2");
    }
    const MeasureEvaluator ev(s, h);
    const std::vector<double> centers =
        candidate_centers(s, opt.generation, opt.enumeration_cap);

    // Shortest relevant radius: half the cylinder length at the candidate
    // generation along the slowest-shrinking branch word, floored where the
    // window pullback stops being evaluable in doubles.  Pulling [c-r, c+r]
    // back through a chain map divides the ~1e-16 absolute endpoint error by
    // a slope comparable to 2r, so below the floor the evaluated window no
    // longer tracks the sampled ball; the conformal relation replicates any
    // smaller-radius density at a coarser radius around a deeper preimage
    // point, so the floor loses no structure from the scanned family.
    const double rmin = std::max(
        0.5 * std::pow(s.branch_ratio(s.n), static_cast<double>(opt.generation)),
        kMinSampleRadius);

    std::vector<double> grid;  // 1/(n+1) < ... < 1/2 < 1, ascending
    grid.reserve(static_cast<std::size_t>(s.n) + 1);
    for (int j = s.n + 1; j >= 1; --j) grid.push_back(1.0 / j);

    const double hull_left = leftmost_point(s);
    const double hull_right = rightmost_point(s);
    std::vector<double> corners;  // branch images of the hull ends, ascending
    corners.reserve(2 * static_cast<std::size_t>(s.n));
    for (int k = 1; k <= s.n; ++k) {
        corners.push_back(s.branch(k)(hull_left));
        corners.push_back(s.branch(k)(hull_right));
    }
    std::sort(corners.begin(), corners.end());

    std::atomic<double> threshold{kInf};
    const int threads = resolve_threads(opt.threads);
    std::vector<BestPair> bests(static_cast<std::size_t>(threads));
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(threads), 0);

    auto worker = [&](int id, std::size_t begin, std::size_t end) {
        BestPair& best = bests[static_cast<std::size_t>(id)];
        std::uint64_t pairs = 0;
        double chain_lo[kMaxChain];
        double chain_hi[kMaxChain];
        double chain_slope[kMaxChain];
        double chain_off[kMaxChain];
        for (std::size_t ci = begin; ci < end; ++ci) {
            const double c = centers[ci];
            const double rmax = std::min(c, 1.0 - c);
            if (!(rmax > 0.0)) continue;

            chain_lo[0] = 0.0;
            chain_hi[0] = 1.0;
            chain_slope[0] = 1.0;
            chain_off[0] = 0.0;
            int levels = 1;
            while (levels < kMaxChain) {
                const int j = levels - 1;
                const double u = (c - chain_off[j]) / chain_slope[j];
                const int k = s.branch_containing(u);
                const LinearMap child =
                    LinearMap{chain_slope[j], chain_off[j]}.compose(s.branch(k));
                const Interval ci2 = child.image({0.0, 1.0});
                if (!(ci2.left <= c && c <= ci2.right)) break;
                if (ci2.length() < 2.0 * rmin) break;
                chain_lo[levels] = ci2.left;
                chain_hi[levels] = ci2.right;
                chain_slope[levels] = child.slope;
                chain_off[levels] = child.intercept;
                ++levels;
            }

            auto eval_radius = [&](double r) {
                if (!(r >= kMinSampleRadius) || r > rmax) return;
                ++pairs;
                const double bl = c - r;
                const double br = c + r;
                int lo_i = 0;
                int hi_i = levels - 1;
                while (lo_i < hi_i) {
                    const int mid = (lo_i + hi_i + 1) / 2;
                    if (chain_lo[mid] <= bl && br <= chain_hi[mid]) {
                        lo_i = mid;
                    } else {
                        hi_i = mid - 1;
                    }
                }
                const double t1 = (bl - chain_off[lo_i]) / chain_slope[lo_i];
                const double t2 = (br - chain_off[lo_i]) / chain_slope[lo_i];
                const double plo = std::min(t1, t2);
                const double phi = std::max(t1, t2);
                if (!(phi > plo)) return;
                const double thr = threshold.load(std::memory_order_relaxed);
                const double d =
                    ev.density_upper_pruned(plo, phi, thr, opt.max_depth, opt.tol);
                if (d < kInf) {
                    best.offer(d, c, r);
                    atomic_min(threshold, d);
                }
            };

            // Structural radii reach the grid neighbours of c and the
            // attractor corners just beyond them; the corner past the grid
            // point above c realises the sharp dip next to 1/n.
            const auto gr = std::lower_bound(grid.begin(), grid.end(), c);
            if (gr != grid.begin()) {
                const double g = *(gr - 1);
                eval_radius(c - g);
                const auto cp = std::lower_bound(corners.begin(), corners.end(), g);
                if (cp != corners.begin()) eval_radius(c - *(cp - 1));
            }
            auto gu = gr;
            while (gu != grid.end() && *gu <= c) ++gu;
            if (gu != grid.end()) {
                const double g = *gu;
                eval_radius(g - c);
                const auto cs = std::upper_bound(corners.begin(), corners.end(), g);
                if (cs != corners.end()) eval_radius(*cs - c);
            }

            if (rmax <= rmin) {
                eval_radius(rmax);
            } else {
                const double llo = std::log(rmin);
                const double lhi = std::log(rmax);
                const int R = opt.radii_per_center;
                for (int i = 0; i < R; ++i) {
                    const double r = (i == R - 1)
                                         ? rmax
                                         : std::exp(llo + (lhi - llo) * i / (R - 1));
                    eval_radius(r);
                }
            }
        }
        counts[static_cast<std::size_t>(id)] = pairs;
    };

    const std::size_t total = centers.size();
    if (threads == 1) {
        worker(0, 0, total);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        const std::size_t chunk =
            (total + static_cast<std::size_t>(threads) - 1) / static_cast<std::size_t>(threads);
        for (int t = 0; t < threads; ++t) {
            const std::size_t b = std::min(total, static_cast<std::size_t>(t) * chunk);
            const std::size_t e = std::min(total, b + chunk);
            pool.emplace_back(worker, t, b, e);
        }
        for (auto& th : pool) th.join();
    }

    DminSample out;
    BestPair best;
    for (const BestPair& b : bests) {
        if (b.d < kInf) best.offer(b.d, b.c, b.r);
    }
    for (const std::uint64_t cnt : counts) out.pairs_evaluated += cnt;
    out.dmin_upper = best.d;
    out.witness = Witness{best.c, best.r, best.d};
    return out;
}

bool intersects_limit_set(const IfsSystem& s, Interval probe, int depth) {
    const double lo = std::max(probe.left, leftmost_point(s));
    const double hi = std::min(probe.right, rightmost_point(s));
    if (!(hi >= lo)) return false;
    if (depth <= 0) return true;
    const int k_hi = s.branch_containing(lo);
    const int k_lo = s.branch_containing(hi);
    for (int k = k_lo; k <= k_hi; ++k) {
        const Interval bk = s.branch_interval(k);
        const double plo = std::max(lo, bk.left);
        const double phi = std::min(hi, bk.right);
        if (!(phi >= plo)) continue;
        // Covering the whole branch interval covers that branch's copy of
        // the attractor, which is nonempty.
        if (lo <= bk.left && hi >= bk.right) return true;
        if (intersects_limit_set(s, {s.forward(k, phi), s.forward(k, plo)}, depth - 1)) {
            return true;
        }
    }
    return false;
}

namespace {

struct Box {
    double c0, c1, r0, r1;
    double bound;
};

struct BoxOrder {
    bool operator()(const Box& a, const Box& b) const { return a.bound > b.bound; }
};

}  // namespace

DminBound dmin_lower_bound(const IfsSystem& s, double h, const SearchOptions& opt) {
    if (s.n < 2) {
        throw std::invalid_argument("dmin_lower_bound: n must be at least 2");
    }
    DminBound out;
    if (opt.certify_budget == 0) return out;

    const MeasureEvaluator ev(s, h);
    const double hull_left = leftmost_point(s);
    const double hull_right = rightmost_point(s);
    // Any ball not touching a grid point 1/j expands under the forward maps,
    // density preserved, until it does; grid-touching balls centered on the
    // attractor keep radius at least the hull-to-base gap.
    const double r_floor = (hull_left - s.base_left()) * (1.0 - 1e-12);
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(s.n) + 1);
    for (int j = s.n + 1; j >= 1; --j) grid.push_back(1.0 / j);

    auto box_bound = [&](double c0, double c1, double r0, double r1) -> double {
        const double cm = std::clamp(0.5, c0, c1);
        if (r0 > std::min(cm, 1.0 - cm)) return kInf;
        const auto g = std::lower_bound(grid.begin(), grid.end(), c0 - r1);
        if (g == grid.end() || *g > c1 + r1) return kInf;
        if (!intersects_limit_set(s, {c0 - 1e-15, c1 + 1e-15}, 24)) return kInf;
        const double common_lo = c1 - r0;
        const double common_hi = c0 + r0;
        if (!(common_hi > common_lo)) return 0.0;
        const double mass =
            ev.measure({common_lo, common_hi}, opt.max_depth, 1e-9).lower;
        return mass / std::pow(2.0 * r1, h) * (1.0 - 1e-12);
    };

    std::priority_queue<Box, std::vector<Box>, BoxOrder> heap;
    {
        Box root{hull_left, hull_right, r_floor, 0.5, 0.0};
        root.bound = box_bound(root.c0, root.c1, root.r0, root.r1);
        if (root.bound < kInf) heap.push(root);
    }
    double frozen = kInf;
    while (!heap.empty() && out.boxes_processed < opt.certify_budget) {
        const Box box = heap.top();
        heap.pop();
        ++out.boxes_processed;
        const bool c_done = (box.c1 - box.c0) <= 1e-12 * std::max(1.0, box.c1);
        const bool r_done = (box.r1 - box.r0) <= 1e-9 * box.r1;
        if (c_done && r_done) {
            frozen = std::min(frozen, box.bound);
            continue;
        }
        Box kids[2];
        if (!c_done && (r_done || (box.c1 - box.c0) >= (box.r1 - box.r0))) {
            const double cm = 0.5 * (box.c0 + box.c1);
            kids[0] = Box{box.c0, cm, box.r0, box.r1, 0.0};
            kids[1] = Box{cm, box.c1, box.r0, box.r1, 0.0};
        } else {
            double rm = std::sqrt(box.r0 * box.r1);
            if (!(rm > box.r0 && rm < box.r1)) rm = 0.5 * (box.r0 + box.r1);
            kids[0] = Box{box.c0, box.c1, box.r0, rm, 0.0};
            kids[1] = Box{box.c0, box.c1, rm, box.r1, 0.0};
        }
        for (Box& kid : kids) {
            kid.bound = box_bound(kid.c0, kid.c1, kid.r0, kid.r1);
            if (kid.bound < kInf) heap.push(kid);
        }
    }

    double value;
    if (heap.empty()) {
        value = (frozen < kInf) ? frozen : 0.0;
        out.partial = false;
    } else {
        value = std::min(heap.top().bound, frozen);
        out.partial = true;
    }
    out.value = std::max(0.0, value);
    return out;
}

PackingEstimate packing_estimate(int n, const SearchOptions& opt) {
    if (n < 2) {
        throw std::invalid_argument("packing_estimate: n must be at least 2");
    }
    const IfsSystem s = make_gauss_linear_ifs(n);
    const DimensionResult dim = solve_dimension(s);
    const DminSample up = dmin_sampled(s, dim.h, opt);
    const DminBound lo = dmin_lower_bound(s, dim.h, opt);
    PackingEstimate e;
    e.n = n;
    e.h = dim.h;
    e.dmin_upper = up.dmin_upper;
    e.dmin_lower = lo.value;
    e.packing_lower = 1.0 / up.dmin_upper;
    e.packing_upper = lo.value > 0.0 ? 1.0 / lo.value : kInf;
    e.witness = up.witness;
    return e;
}

std::vector<PackingEstimate> sweep(int n_min, int n_max, const SearchOptions& opt) {
    if (n_min < 2) {
        throw std::invalid_argument("sweep: n_min must be at least 2");
    }
    if (n_max < n_min) {
        throw std::invalid_argument("sweep: n_max must be at least n_min");
    }
    if (opt.n_stride < 1) {
        throw std::invalid_argument("sweep: n_stride must be positive");
    }
    if (opt.n_geometric && opt.n_stride < 2) {
        throw std::invalid_argument("sweep: geometric stride must be at least 2");
    }
    std::vector<PackingEstimate> rows;
    for (long n = n_min; n <= n_max;
         n = opt.n_geometric ? n * opt.n_stride : n + opt.n_stride) {
        rows.push_back(packing_estimate(static_cast<int>(n), opt));
    }
    return rows;
}

}  // namespace packdim
