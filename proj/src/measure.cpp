/**
 * @file measure.cpp
 * @brief Interval mass enclosures over the cylinder tree.
 */

#include "packdim/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "packdim/dimension.hpp"
#include "packdim/numeric.hpp"

namespace packdim {

namespace {

constexpr double kTwoThirds = 2.0 / 3.0;
constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace

/// Accumulator shared across one evaluation. `sum` collects mass proven
/// inside the query interval, `unresolved` collects parked upper-bound mass.
/// Once `sum` alone exceeds `abort_mass` the walk stops early.
struct MeasureEvaluator::State {
    KahanSum sum;
    KahanSum unresolved;
    int depth_used = 0;
    int max_depth = kDefaultMaxDepth;
    double chunk_tol = 0.0;
    double abort_mass = kInfinity;
    bool aborted = false;

    void add(double x) {
        sum.add(x);
        if (sum.value() > abort_mass) aborted = true;
    }
};

MeasureEvaluator::MeasureEvaluator(const IfsSystem& system, double h)
    : n_(system.n), h_(h), base_left_(system.base_left()) {
    const bool point_mass = (n_ == 1 && h_ == 0.0);
    if (!point_mass && !(h_ > 0.0 && h_ <= 1.0)) {
        throw std::invalid_argument("MeasureEvaluator: h must lie in (0, 1]");
    }
    residual_ = moran_residual(system, h_);
    if (!(std::fabs(residual_) <= 1e-10)) {
        throw std::invalid_argument(
            "MeasureEvaluator: branch weights do not sum to 1 at this exponent");
    }
    // Weight roundoff compounds along the recursion; every enclosure is
    // widened outward by this amount on both ends.
    slack_ = 1e-13 + 256.0 * std::fabs(residual_);
    // Upper bound on the relative mass of a branch piece whose pullback
    // collapses to zero width in doubles (true width is then below ~1e-15).
    collapse_mass_ = 8.0 * std::pow(5e-16, h_);
    w_.assign(static_cast<std::size_t>(n_) + 1, 0.0);
    prefix_.assign(static_cast<std::size_t>(n_) + 1, 0.0);
    KahanSum acc;
    for (int k = 1; k <= n_; ++k) {
        w_[static_cast<std::size_t>(k)] = std::pow(system.branch_ratio(k), h_);
        acc.add(w_[static_cast<std::size_t>(k)]);
        prefix_[static_cast<std::size_t>(k)] = acc.value();
    }
}

/// Branch index whose interval [1/(k+1), 1/k] contains x. Requires
/// 0 < x < 1; at a shared endpoint 1/k either neighbour may be returned,
/// and the caller's full/partial split is endpoint-exact in both cases.
int MeasureEvaluator::locate(double x) const {
    int k = static_cast<int>(1.0 / x);
    if (k < 1) k = 1;
    if (k > n_) k = n_;
    while (k < n_ && x < 1.0 / (k + 1)) ++k;
    while (k > 1 && x > 1.0 / k) --k;
    return k;
}

/// Pulls the piece [aa, bb] of branch k back to level coordinates and
/// recurses. Parks the whole child weight when the depth or weight cutoff
/// is reached, and a collapse allowance when the pullback has no width.
void MeasureEvaluator::descend(int k, double aa, double bb, double wgt, int depth,
                               State& st) const {
    if (st.aborted) return;
    const double cw = wgt * w_[static_cast<std::size_t>(k)];
    if (depth >= st.max_depth || cw <= st.chunk_tol) {
        st.unresolved.add(cw);
        return;
    }
    const double scale = static_cast<double>(k) * (k + 1);
    const double inv_k = 1.0 / k;
    const double lo = (inv_k - bb) * scale;
    const double hi = (inv_k - aa) * scale;
    if (!(hi > lo)) {
        st.unresolved.add(cw * collapse_mass_);
        return;
    }
    eval(lo, hi, cw, depth + 1, st);
}

/// Mass of [a, b] at the current level, weighted by wgt. Branch intervals
/// fully inside [a, b] are credited from the prefix cache; at most two
/// partial branch pieces (or one interior piece) descend one level.
void MeasureEvaluator::eval(double a, double b, double wgt, int depth, State& st) const {
    if (st.aborted) return;
    if (!(b > a)) return;
    if (b <= base_left_ || a >= 1.0) return;
    if (depth > st.depth_used) st.depth_used = depth;

    const bool left_anchor = (a <= base_left_);
    const bool right_anchor = (b >= 1.0);
    if (left_anchor && right_anchor) {
        st.add(wgt);
        return;
    }

    const int kR = right_anchor ? 1 : locate(b);
    const int kL = left_anchor ? n_ : locate(a);
    const int full_lo = right_anchor ? 1 : (b >= 1.0 / kR ? kR : kR + 1);
    const int full_hi = left_anchor ? n_ : (a <= 1.0 / (kL + 1) ? kL : kL - 1);
    if (full_hi >= full_lo) {
        st.add(wgt * (prefix_[static_cast<std::size_t>(full_hi)] -
                      prefix_[static_cast<std::size_t>(full_lo) - 1]));
        if (st.aborted) return;
    }

    if (!left_anchor && !right_anchor && kL == kR && full_hi < kL && full_lo > kR) {
        descend(kL, a, b, wgt, depth, st);
        return;
    }
    if (!left_anchor && full_hi < kL) {
        const double bb = std::min(b, 1.0 / kL);
        if (bb > a) descend(kL, a, bb, wgt, depth, st);
    }
    if (!right_anchor && full_lo > kR) {
        const double aa = std::max(a, 1.0 / (kR + 1));
        if (b > aa) descend(kR, aa, b, wgt, depth, st);
    }
}

MeasureBound MeasureEvaluator::measure(Interval a, int max_depth, double tol) const {
    if (!(a.left <= a.right)) {
        throw std::invalid_argument("measure: interval has left > right");
    }
    if (max_depth < 1 || max_depth > 200) {
        throw std::invalid_argument("measure: max_depth must lie in [1, 200]");
    }
    if (!(tol >= 0.0)) {
        throw std::invalid_argument("measure: tol must be nonnegative");
    }
    const double lo = std::max(a.left, 0.0);
    const double hi = std::min(a.right, 1.0);

    MeasureBound out;
    if (n_ == 1) {
        const bool inside = (lo <= kTwoThirds && hi >= kTwoThirds);
        out.lower = out.upper = inside ? 1.0 : 0.0;
        return out;
    }
    if (!(hi > lo)) return out;
    if (lo <= base_left_ && hi >= 1.0) {
        out.lower = out.upper = 1.0;
        return out;
    }

    State st;
    st.max_depth = max_depth;
    st.chunk_tol = tol * 0.25;
    eval(lo, hi, 1.0, 0, st);
    const double s = st.sum.value();
    const double u = st.unresolved.value();
    out.lower = std::max(0.0, s - slack_);
    out.upper = std::min(1.0, s + u + slack_);
    out.depth_used = st.depth_used;
    out.unresolved = u;
    return out;
}

DensityRecord MeasureEvaluator::density(Interval a, int max_depth, double tol) const {
    if (!(a.right > a.left)) {
        throw std::invalid_argument("density: interval must have positive length");
    }
    DensityRecord rec;
    rec.interval = a;
    rec.h = h_;
    rec.mass = measure(a, max_depth, tol);
    const double denom = std::pow(a.right - a.left, h_);
    rec.density_lower = rec.mass.lower / denom;
    rec.density_upper = rec.mass.upper / denom;
    return rec;
}

double MeasureEvaluator::density_upper_pruned(double lo, double hi, double abort_above,
                                              int max_depth, double tol) const {
    if (!(hi > lo)) {
        throw std::invalid_argument("density_upper_pruned: interval must have positive length");
    }
    if (max_depth < 1 || max_depth > 200) {
        throw std::invalid_argument("density_upper_pruned: max_depth must lie in [1, 200]");
    }
    if (!(tol >= 0.0)) {
        throw std::invalid_argument("density_upper_pruned: tol must be nonnegative");
    }
    const double denom = std::pow(hi - lo, h_);
    if (n_ == 1) return measure({lo, hi}, max_depth, tol).upper / denom;

    const double a0 = std::max(lo, 0.0);
    const double b0 = std::min(hi, 1.0);
    if (!(b0 > a0)) return 0.0;
    if (a0 <= base_left_ && b0 >= 1.0) return 1.0 / denom;

    State st;
    st.max_depth = max_depth;
    st.chunk_tol = tol * 0.25;
    st.abort_mass = abort_above * denom + slack_;
    eval(a0, b0, 1.0, 0, st);
    if (st.aborted) return kInfinity;
    const double upper = std::min(1.0, st.sum.value() + st.unresolved.value() + slack_);
    return upper / denom;
}

MeasureBound measure_interval(const IfsSystem& system, double h, Interval a,
                              int max_depth, double tol) {
    return MeasureEvaluator(system, h).measure(a, max_depth, tol);
}

DensityRecord density(const IfsSystem& system, double h, Interval a, int max_depth,
                      double tol) {
    return MeasureEvaluator(system, h).density(a, max_depth, tol);
}

}  // namespace packdim
