#include "packdim/ifs.hpp"

#include <cmath>
#include <stdexcept>

namespace packdim {

int IfsSystem::branch_containing(double x) const {
    if (x >= 1.0) return 1;
    if (x <= base_left()) return n;
    int k = static_cast<int>(1.0 / x);
    if (k < 1) k = 1;
    if (k > n) k = n;
    while (k < n && x < 1.0 / (k + 1)) ++k;
    while (k > 1 && x > 1.0 / k) --k;
    return k;
}

IfsSystem make_gauss_linear_ifs(int n) {
    if (n < 1) throw std::invalid_argument("ifs: branch count must be at least 1");
    if (n > (1 << 20)) throw std::invalid_argument("ifs: branch count too large");
    IfsSystem s;
    s.n = n;
    s.branches.reserve(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k)
        s.branches.push_back({-s.branch_ratio(k), 1.0 / k});
    return s;
}

LinearMap word_map(const IfsSystem& s, const Word& w) {
    LinearMap m;
    for (int q : w) {
        if (q < 1 || q > s.n) throw std::invalid_argument("ifs: word letter outside 1..n");
        m = m.compose(s.branch(q));
    }
    return m;
}

Interval cylinder_interval(const IfsSystem& s, const Word& w) {
    return word_map(s, w).image({0.0, 1.0});
}

std::vector<Cylinder> enumerate_generation(const IfsSystem& s, int generation, double h,
                                           std::uint64_t cap) {
    if (generation < 0) throw std::invalid_argument("ifs: generation must be nonnegative");
    if (!(h >= 0.0 && h <= 1.0)) throw std::invalid_argument("ifs: h must lie in [0, 1]");
    std::uint64_t total = 1;
    for (int i = 0; i < generation; ++i) {
        if (total > cap / static_cast<std::uint64_t>(s.n))
            throw std::runtime_error("ifs: generation enumeration exceeds cap");
        total *= static_cast<std::uint64_t>(s.n);
    }
    if (total > cap) throw std::runtime_error("ifs: generation enumeration exceeds cap");

    std::vector<Cylinder> out;
    out.reserve(static_cast<std::size_t>(total));
    Word w(static_cast<std::size_t>(generation), 1);
    for (;;) {
        LinearMap m = word_map(s, w);
        out.push_back({w, m.image({0.0, 1.0}), std::pow(std::fabs(m.slope), h)});
        int i = generation - 1;
        while (i >= 0 && w[static_cast<std::size_t>(i)] == s.n) {
            w[static_cast<std::size_t>(i)] = 1;
            --i;
        }
        if (i < 0) break;
        ++w[static_cast<std::size_t>(i)];
    }
    return out;
}

double leftmost_point(const IfsSystem& s) {
    double n = s.n;
    return 2.0 * n / (2.0 * n * n + 2.0 * n - 1.0);
}

double rightmost_point(const IfsSystem& s) {
    double n = s.n;
    return (2.0 * n * n + n - 1.0) / (2.0 * n * n + 2.0 * n - 1.0);
}

Interval attractor_hull(const IfsSystem& s) {
    return {leftmost_point(s), rightmost_point(s)};
}

double periodic_point(const IfsSystem& s, const Word& w) {
    if (w.empty()) throw std::invalid_argument("ifs: periodic point needs a nonempty word");
    LinearMap m = word_map(s, w);
    return m.intercept / (1.0 - m.slope);
}

ExpansionResult expand_to_grid(const IfsSystem& s, Interval a) {
    if (!(a.left <= a.right)) throw std::invalid_argument("ifs: interval has left > right");
    Interval cur = a;
    for (int steps = 0;; ++steps) {
        if (cur.right < s.base_left() || cur.left > 1.0)
            throw std::invalid_argument("ifs: interval lies outside the branch range");
        for (int j = 1; j <= s.n; ++j)
            if (cur.contains(1.0 / j)) return {cur, steps};
        if (cur.left < s.base_left())
            throw std::invalid_argument("ifs: interval straddles the left branch boundary");
        if (steps == kExpansionStepCap)
            throw std::runtime_error("ifs: expansion step cap exceeded");
        // no grid point inside and not straddling, so cur sits in one branch
        int k = s.branch_containing(cur.left);
        cur = {s.forward(k, cur.right), s.forward(k, cur.left)};
    }
}

}  // namespace packdim
