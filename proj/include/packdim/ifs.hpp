#pragma once
/**
 * @file ifs.hpp
 * @brief Linear IFS on [0,1] built from the branch inverses
 *        g_k(x) = 1/k - x/(k(k+1)) for k = 1..n.
 *
 * g_k maps [0,1] onto the k-th branch interval [1/(k+1), 1/k], reversing
 * orientation, with contraction ratio 1/(k(k+1)). The attractor of
 * {g_1, ..., g_n} is a Cantor set inside [1/(n+1), 1]; its convex hull is
 * [leftmost_point, rightmost_point].
 */

#include <cstdint>
#include <vector>

namespace packdim {

/// Default ceiling on enumeration work (words or candidate points).
inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

/// Step cap for expand_to_grid. Each expansion at least doubles the interval
/// length, so only degenerate inputs can reach the cap.
inline constexpr int kExpansionStepCap = 64;

/// Closed interval [left, right]; operations assume left <= right.
struct Interval {
    double left = 0.0;
    double right = 0.0;

    double length() const { return right - left; }
    bool contains(double x) const { return left <= x && x <= right; }
    bool contains(const Interval& o) const { return left <= o.left && o.right <= right; }
    /// Closed-set overlap test; shared endpoints count as overlap.
    bool intersects(const Interval& o) const { return left <= o.right && o.left <= right; }
};

/// Affine map x -> slope * x + intercept.
struct LinearMap {
    double slope = 1.0;
    double intercept = 0.0;

    double operator()(double x) const { return slope * x + intercept; }
    /// Composition this(inner(x)).
    LinearMap compose(const LinearMap& inner) const {
        return {slope * inner.slope, slope * inner.intercept + intercept};
    }
    /// Image of an interval; endpoints swap when slope < 0.
    Interval image(const Interval& a) const {
        double u = (*this)(a.left), v = (*this)(a.right);
        return u <= v ? Interval{u, v} : Interval{v, u};
    }
};

using Word = std::vector<int>;

/// Cylinder of a word: letters outermost first, the word map image of [0,1],
/// and the word's contraction ratio raised to h.
struct Cylinder {
    Word word;
    Interval interval;
    double weight = 0.0;
};

/// The system {g_1..g_n}. Branch indices are 1-based everywhere.
struct IfsSystem {
    int n = 0;
    std::vector<LinearMap> branches;  ///< branches[k-1] is g_k

    const LinearMap& branch(int k) const { return branches[k - 1]; }
    double branch_ratio(int k) const {
        return 1.0 / (static_cast<double>(k) * (k + 1));
    }
    Interval branch_interval(int k) const { return {1.0 / (k + 1), 1.0 / k}; }
    /// Left endpoint 1/(n+1) of the union of branch intervals.
    double base_left() const { return 1.0 / (n + 1.0); }
    /// Forward expansion inverse to g_k: f_k(x) = (1/k - x) * k(k+1).
    double forward(int k, double x) const {
        return (1.0 / k - x) * (static_cast<double>(k) * (k + 1));
    }
    /// Branch index k with 1/(k+1) <= x <= 1/k, clamped to [1, n] outside.
    int branch_containing(double x) const;
};

IfsSystem make_gauss_linear_ifs(int n);

/// Affine composition g_{w1} o g_{w2} o ... o g_{wl}; identity for empty w.
LinearMap word_map(const IfsSystem&, const Word&);

/// Image of [0,1] under word_map(w).
Interval cylinder_interval(const IfsSystem&, const Word&);

/// All n^l generation-l cylinders in lexicographic word order. Throws when
/// n^l exceeds cap.
std::vector<Cylinder> enumerate_generation(const IfsSystem&, int generation, double h,
                                           std::uint64_t cap = kDefaultEnumerationCap);

/// Smallest attractor point 2n/(2n^2+2n-1), the fixed point of g_n o g_1.
double leftmost_point(const IfsSystem&);
/// Largest attractor point (2n^2+n-1)/(2n^2+2n-1), the image of the leftmost
/// point under g_1 and the fixed point of g_1 o g_n.
double rightmost_point(const IfsSystem&);
/// Convex hull [leftmost, rightmost] of the attractor.
Interval attractor_hull(const IfsSystem&);

/// Fixed point of word_map(w); lies in the cylinder of w. w must be nonempty.
double periodic_point(const IfsSystem&, const Word&);

struct ExpansionResult {
    Interval interval;
    int steps = 0;
};

/// Repeated forward expansion of an interval lying inside a single branch
/// until the image contains a grid point 1/j, j = 1..n. Inputs disjoint from
/// [1/(n+1), 1], or straddling 1/(n+1) without containing a grid point, are
/// rejected with std::invalid_argument; exceeding kExpansionStepCap raises
/// std::runtime_error.
ExpansionResult expand_to_grid(const IfsSystem&, Interval);

}  // namespace packdim
