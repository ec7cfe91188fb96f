#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "pfx/errors.hpp"

namespace pfx {

/// Distances at or below this value are treated as zero when feeding a
/// gauge F (which is undefined at 0) or deciding pair eligibility.
inline constexpr double zero_distance_threshold = 1e-14;

/// Render a double with full round-trip precision (17 significant digits).
inline std::string repr_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    for (std::size_t i = 0; i < n; ++i)
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return out;
}

/// Geometric grid from lo to hi inclusive; endpoints exact.
inline std::vector<double> logspace(double lo, double hi, std::size_t n) {
    if (lo <= 0.0 || hi <= 0.0)
        throw domain_error("logspace: endpoints must be positive");
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    const double llo = std::log(lo), lhi = std::log(hi);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) / static_cast<double>(n - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

/// A real-valued function sampled on the uniform grid t_i = i/(n_nodes-1)
/// over [0,1]. Node count is odd so composite Simpson weights apply.
struct grid_function {
    std::vector<double> values;

    grid_function() = default;
    explicit grid_function(std::size_t n_nodes, double fill = 0.0) : values(n_nodes, fill) {
        check_nodes(n_nodes);
    }
    explicit grid_function(std::vector<double> v) : values(std::move(v)) {
        check_nodes(values.size());
    }

    static void check_nodes(std::size_t n) {
        if (n < 3 || n % 2 == 0)
            throw shape_mismatch("grid_function: n_nodes must be odd and >= 3, got " +
                                 std::to_string(n));
    }

    std::size_t n_nodes() const { return values.size(); }
    double spacing() const { return 1.0 / static_cast<double>(values.size() - 1); }
    double node(std::size_t i) const { return static_cast<double>(i) * spacing(); }

    double sup_norm() const {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }

    /// Sample an expression-like callable t -> value on the grid.
    template <std::invocable<double> F>
    static grid_function sample(std::size_t n_nodes, F&& f) {
        grid_function g(n_nodes);
        for (std::size_t i = 0; i < n_nodes; ++i) g.values[i] = f(g.node(i));
        return g;
    }
};

inline double sup_diff(const grid_function& a, const grid_function& b) {
    if (a.n_nodes() != b.n_nodes())
        throw shape_mismatch("grid functions have " + std::to_string(a.n_nodes()) + " vs " +
                             std::to_string(b.n_nodes()) + " nodes");
    double m = 0.0;
    for (std::size_t i = 0; i < a.n_nodes(); ++i)
        m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

/// Closed scalar interval [lo, hi].
struct interval_domain {
    using point_type = double;

    double lo = 0.0;
    double hi = 1.0;

    interval_domain() = default;
    interval_domain(double lo_, double hi_) : lo(lo_), hi(hi_) {
        if (!(lo < hi)) throw domain_error("interval_domain: need lo < hi");
    }

    bool contains(double x) const { return std::isfinite(x) && x >= lo && x <= hi; }

    // tol == 0 means exact equality, used by fixed-point detection.
    bool equal(double a, double b, double tol) const {
        return tol == 0.0 ? a == b : std::abs(a - b) <= tol;
    }

    std::string repr(double x) const { return repr_double(x); }

    /// Audit sample: uniform 41-point grid plus the special points
    /// {0, 1/3, 1/2} when they fall inside the interval.
    std::vector<double> default_sample(std::size_t n = 41) const {
        std::vector<double> s = linspace(lo, hi, n);
        for (double p : {0.0, 1.0 / 3.0, 0.5})
            if (contains(p) && std::find(s.begin(), s.end(), p) == s.end()) s.push_back(p);
        return s;
    }

    /// Dense evaluation grid used for pair sampling (default 200 points).
    std::vector<double> pair_grid(std::size_t n = 200) const { return linspace(lo, hi, n); }
};

/// The space of grid functions on a fixed node count, optionally bounded
/// in sup norm.
struct grid_function_domain {
    using point_type = grid_function;

    std::size_t n_nodes = 201;
    double bound = std::numeric_limits<double>::infinity();

    explicit grid_function_domain(std::size_t n = 201,
                                  double bound_ = std::numeric_limits<double>::infinity())
        : n_nodes(n), bound(bound_) {
        grid_function::check_nodes(n);
    }

    bool contains(const grid_function& u) const {
        if (u.n_nodes() != n_nodes) return false;
        for (double v : u.values)
            if (!std::isfinite(v)) return false;
        return u.sup_norm() <= bound;
    }

    bool equal(const grid_function& a, const grid_function& b, double tol) const {
        if (a.n_nodes() != b.n_nodes()) return false;
        if (tol == 0.0) return a.values == b.values;
        return sup_diff(a, b) <= tol;
    }

    std::string repr(const grid_function& u) const { return "sup=" + repr_double(u.sup_norm()); }

    /// Seeded sample of random bounded grid functions (node values iid
    /// uniform in [-amplitude, amplitude]).
    std::vector<grid_function> default_sample(std::size_t count = 50, std::uint64_t seed = 0,
                                              double amplitude = 1.0) const {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> dist(-amplitude, amplitude);
        std::vector<grid_function> out;
        out.reserve(count);
        for (std::size_t k = 0; k < count; ++k) {
            grid_function g(n_nodes);
            for (auto& v : g.values) v = dist(rng);
            out.push_back(std::move(g));
        }
        return out;
    }
};

template <class D>
concept point_domain = requires(const D d, const typename D::point_type& p) {
    { d.contains(p) } -> std::convertible_to<bool>;
    { d.equal(p, p, 0.0) } -> std::convertible_to<bool>;
    { d.repr(p) } -> std::convertible_to<std::string>;
};

/// A self-map T : X -> X on a declared domain.
template <point_domain Domain>
struct self_map {
    using point_type = typename Domain::point_type;

    std::function<point_type(const point_type&)> apply;
    Domain domain;

    point_type operator()(const point_type& x) const { return apply(x); }
};

}  // namespace pfx
