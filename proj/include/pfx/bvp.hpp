#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pfx/domain.hpp"
#include "pfx/errors.hpp"
#include "pfx/iterate.hpp"
#include "pfx/metric.hpp"
#include "pfx/report.hpp"

namespace pfx {

/// The two-point boundary value problem -u'' = f(t, u), u(0) = u(1) = 0,
/// recast as the fixed point of u -> integral of G(t,s) f(s, u(s)) ds.
/// lipschitz_bound = exp(-tau) is the target bound for
/// |f(s,u1) - f(s,u2)| <= exp(-tau) |u1 - u2|.
struct bvp_problem {
    std::function<double(double, double)> f;  // f(s, u)
    double tau = 0.0;
    double lipschitz_bound = 1.0;

    bvp_problem() = default;
    bvp_problem(std::function<double(double, double)> f_, double tau_)
        : f(std::move(f_)), tau(tau_), lipschitz_bound(std::exp(-tau_)) {
        if (!(tau > 0.0)) throw domain_error("bvp_problem: tau must be positive");
    }
};

/// Green's function of -u'' with homogeneous Dirichlet conditions:
/// G(t,s) = s(1-t) for s <= t, t(1-s) otherwise. Symmetric, zero on the
/// boundary of the unit square.
inline double green_kernel(double t, double s) {
    if (!(t >= 0.0 && t <= 1.0 && s >= 0.0 && s <= 1.0))
        throw domain_error("green_kernel: (t, s) outside the unit square");
    return s <= t ? s * (1.0 - t) : t * (1.0 - s);
}

namespace detail {

/// Integrate grid samples over the first `intervals` grid cells with a
/// 4th-order rule: composite Simpson when the count is even, composite
/// Simpson plus a trailing Simpson 3/8 block when it is odd.
inline double integrate_prefix(std::span<const double> y, double h, std::size_t intervals) {
    if (intervals == 0) return 0.0;
    if (intervals == 1)  // single cell: trapezoid, only used for n_nodes = 3 edges
        return 0.5 * h * (y[0] + y[1]);

    double sum = 0.0;
    std::size_t simpson_end = intervals;
    if (intervals % 2 == 1) simpson_end = intervals - 3;  // leave a 3/8 block

    for (std::size_t j = 0; j + 2 <= simpson_end; j += 2)
        sum += h / 3.0 * (y[j] + 4.0 * y[j + 1] + y[j + 2]);

    if (simpson_end != intervals) {
        const std::size_t j = simpson_end;
        sum += 3.0 * h / 8.0 * (y[j] + 3.0 * y[j + 1] + 3.0 * y[j + 2] + y[j + 3]);
    }
    return sum;
}

}  // namespace detail

/// Row integral of the kernel: integral of G(t, s) ds over [0, 1],
/// evaluated with the same split quadrature the operator uses
/// (n_nodes samples per side). Closed form: t(1-t)/2, maximal 1/8 at
/// t = 1/2 -- the sharp kernel factor for operator norm estimates.
inline double kernel_row_integral(double t, std::size_t n_nodes = 201) {
    if (!(t >= 0.0 && t <= 1.0)) throw domain_error("kernel_row_integral: t outside [0,1]");
    grid_function::check_nodes(n_nodes);

    // G is piecewise linear in s with the kink at s = t; integrate the two
    // smooth pieces separately, each sampled on n_nodes points.
    const std::size_t m = n_nodes;
    std::vector<double> yl(m), yr(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double a = static_cast<double>(j) / static_cast<double>(m - 1);
        yl[j] = (a * t) * (1.0 - t);                  // s(1-t) on [0, t]
        yr[j] = t * (1.0 - (t + a * (1.0 - t)));       // t(1-s) on [t, 1]
    }
    const double hl = t / static_cast<double>(m - 1);
    const double hr = (1.0 - t) / static_cast<double>(m - 1);
    return detail::integrate_prefix(yl, hl, m - 1) + detail::integrate_prefix(yr, hr, m - 1);
}

/// Apply the integral operator (Tu)(t_i) = integral of G(t_i, s) f(s, u(s)) ds.
///
/// The integrand has a derivative kink at s = t_i; since every t_i is a
/// grid node, each row splits into [0, t_i] and [t_i, 1] and both sides
/// are integrated with a 4th-order rule on whole grid cells (composite
/// Simpson, with a Simpson 3/8 block when a side has an odd cell count).
/// Boundary rows are exactly zero.
inline grid_function apply_operator(const grid_function& u, const bvp_problem& p) {
    const std::size_t n = u.n_nodes();
    const double h = u.spacing();

    std::vector<double> phi(n);  // f(s_j, u_j)
    for (std::size_t j = 0; j < n; ++j) {
        phi[j] = p.f(u.node(j), u.values[j]);
        if (!std::isfinite(phi[j]))
            throw non_finite_value("apply_operator: f returned a non-finite value at s = " +
                                   repr_double(u.node(j)));
    }

    grid_function out(n);
    std::vector<double> left(n), right(n);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double ti = u.node(i);
        // left integrand s(1-t_i) phi(s) on [0, t_i]; right t_i(1-s) phi(s) on [t_i, 1]
        for (std::size_t j = 0; j <= i; ++j) left[j] = u.node(j) * (1.0 - ti) * phi[j];
        for (std::size_t j = i; j < n; ++j) right[j - i] = ti * (1.0 - u.node(j)) * phi[j];
        out.values[i] = detail::integrate_prefix(left, h, i) +
                        detail::integrate_prefix(std::span(right).first(n - i), h, n - 1 - i);
    }
    out.values[0] = 0.0;
    out.values[n - 1] = 0.0;
    return out;
}

/// The function-space perturbed metric of the boundary value problem:
/// D(u1, u2) = sup |u1 - u2| + |u1(0) - u2(0)|. The perturbation is the
/// endpoint term; the exact part is the sup norm.
inline double function_metric_D(const grid_function& u1, const grid_function& u2) {
    return sup_diff(u1, u2) + std::abs(u1.values.front() - u2.values.front());
}

inline double function_metric_P(const grid_function& u1, const grid_function& u2) {
    if (u1.n_nodes() != u2.n_nodes())
        throw shape_mismatch("function_metric_P: node counts differ");
    return std::abs(u1.values.front() - u2.values.front());
}

/// Assemble the (D, P) pair over the grid-function domain.
inline perturbed_metric<grid_function_domain> make_function_metric(std::size_t n_nodes) {
    perturbed_metric<grid_function_domain> m;
    m.domain = grid_function_domain(n_nodes);
    m.D = [](const grid_function& a, const grid_function& b) { return function_metric_D(a, b); };
    m.P = [](const grid_function& a, const grid_function& b) { return function_metric_P(a, b); };
    return m;
}

/// Sample |f(s,u1) - f(s,u2)| <= exp(-tau) |u1 - u2| on a grid of
/// (s, u1, u2) triples over [0,1] x u_range^2.
inline axiom_report lipschitz_audit(const bvp_problem& p, double u_lo, double u_hi,
                                    std::size_t n_samples = 41, double tol = 1e-12) {
    if (n_samples < 2) throw domain_error("lipschitz_audit: need n_samples >= 2");
    if (!(u_lo < u_hi)) throw domain_error("lipschitz_audit: need u_lo < u_hi");

    const auto s_grid = linspace(0.0, 1.0, n_samples);
    const auto u_grid = linspace(u_lo, u_hi, n_samples);

    axiom_report report;
    report.samples_checked = n_samples * n_samples * n_samples;
    for (double s : s_grid)
        for (double u1 : u_grid)
            for (double u2 : u_grid) {
                const double lhs = std::abs(p.f(s, u1) - p.f(s, u2));
                const double rhs = p.lipschitz_bound * std::abs(u1 - u2);
                if (lhs - rhs > tol)
                    report.add({"LIP",
                                {repr_double(s), repr_double(u1), repr_double(u2)},
                                lhs,
                                rhs,
                                lhs - rhs});
            }
    return report;
}

/// Solve the boundary value problem by Picard iteration of the integral
/// operator in the function-space perturbed metric.
inline std::pair<grid_function, iteration_trace<grid_function>> solve_bvp(
    const bvp_problem& p, const grid_function& u0, double tol = 1e-10,
    std::size_t max_iters = 10000) {
    const auto m = make_function_metric(u0.n_nodes());
    self_map<grid_function_domain> T{
        [&p](const grid_function& u) { return apply_operator(u, p); }, m.domain};
    auto trace = iterate(T, u0, m, tol, max_iters);
    return {trace.final_point(), std::move(trace)};
}

/// Residual of a candidate solution: max over interior nodes of
/// |-(u_{i-1} - 2u_i + u_{i+1})/h^2 - f(t_i, u_i)| plus the boundary
/// deviations |u_0| + |u_N|. Small values certify the differential
/// equation up to the O(h^2) central-difference truncation.
inline double residual_check(const grid_function& u, const bvp_problem& p) {
    const std::size_t n = u.n_nodes();
    if (n < 5) throw shape_mismatch("residual_check: need n_nodes >= 5");
    const double h = u.spacing();

    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double lap = (u.values[i - 1] - 2.0 * u.values[i] + u.values[i + 1]) / (h * h);
        worst = std::max(worst, std::abs(-lap - p.f(u.node(i), u.values[i])));
    }
    return worst + std::abs(u.values.front()) + std::abs(u.values.back());
}

}  // namespace pfx
