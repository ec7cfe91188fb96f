#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pfx/domain.hpp"
#include "pfx/errors.hpp"
#include "pfx/report.hpp"

namespace pfx {

/// A perturbed metric (X, D, P): D is the measured distance, P the
/// perturbation, and d = D - P must be a true metric on X.
template <point_domain Domain>
struct perturbed_metric {
    using point_type = typename Domain::point_type;
    using distance_fn = std::function<double(const point_type&, const point_type&)>;

    distance_fn D;
    distance_fn P;
    Domain domain;

    /// Point-equality tolerance for the (P2) audit.
    double point_tol = 1e-12;
};

namespace detail {

template <point_domain Domain>
void require_in_domain(const Domain& dom, const typename Domain::point_type& x,
                       const char* where) {
    if (!dom.contains(x))
        throw pfx::domain_error(std::string(where) + ": point outside declared domain: " +
                                dom.repr(x));
}

}  // namespace detail

/// d(x, y) = D(x, y) - P(x, y), the exact metric underneath the
/// perturbed one. A negative value beyond tol means the pair (D, P) is
/// not a perturbed metric at all and is reported as such.
template <point_domain Domain>
double eval_exact(const perturbed_metric<Domain>& m, const typename Domain::point_type& x,
                  const typename Domain::point_type& y, double tol = 1e-12) {
    detail::require_in_domain(m.domain, x, "eval_exact");
    detail::require_in_domain(m.domain, y, "eval_exact");
    const double d = m.D(x, y) - m.P(x, y);
    if (d < -tol)
        throw negative_exact_distance("eval_exact: D - P = " + repr_double(d) + " at (" +
                                      m.domain.repr(x) + ", " + m.domain.repr(y) + ")");
    return d;
}

/// Check (P1)-(P4) for the exact metric d = D - P on a finite sample.
/// (P1)-(P3) run over all ordered pairs, (P4) over all ordered triples
/// with pairwise distinct indices. samples_checked is the sample size.
template <point_domain Domain>
axiom_report audit_axioms(const perturbed_metric<Domain>& m,
                          std::span<const typename Domain::point_type> sample, double tol) {
    if (sample.empty()) throw domain_error("audit_axioms: empty sample");
    if (tol < 0.0) throw domain_error("audit_axioms: negative tolerance");
    for (const auto& p : sample) detail::require_in_domain(m.domain, p, "audit_axioms");

    const auto d = [&](std::size_t i, std::size_t j) {
        return m.D(sample[i], sample[j]) - m.P(sample[i], sample[j]);
    };
    const auto rep = [&](std::size_t i) { return m.domain.repr(sample[i]); };

    axiom_report report;
    report.samples_checked = sample.size();
    const std::size_t n = sample.size();

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double dij = d(i, j);
            if (0.0 - dij > tol)
                report.add({"P1", {rep(i), rep(j)}, 0.0, dij, -dij});
            const bool eq = m.domain.equal(sample[i], sample[j], m.point_tol);
            if (eq && dij > tol)
                report.add({"P2", {rep(i), rep(j)}, dij, 0.0, dij});
            if (!eq && dij <= tol)
                report.add({"P2", {rep(i), rep(j)}, tol, dij, tol - dij});
            const double dji = d(j, i);
            if (dij - dji > tol)
                report.add({"P3", {rep(i), rep(j)}, dij, dji, dij - dji});
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                if (i == j || j == k || i == k) continue;
                const double lhs = d(i, j);
                const double rhs = d(i, k) + d(k, j);
                if (lhs - rhs > tol)
                    report.add({"P4", {rep(i), rep(j), rep(k)}, lhs, rhs, lhs - rhs});
            }
    return report;
}

template <class Point>
struct triangle_witness {
    Point x, y, z;      // D(x,y) > D(x,z) + D(z,y)
    double lhs = 0.0;   // D(x,y)
    double rhs = 0.0;   // D(x,z) + D(z,y)
    double gap = 0.0;
};

/// Search a sample for the worst triangle-inequality failure of a raw
/// distance function. Returns the triple maximizing
/// D(x,y) - D(x,z) - D(z,y) if that maximum exceeds tol. Ties break to
/// the lexicographically first index triple, so the result is
/// deterministic for a fixed sample order.
template <point_domain Domain, class Dist>
std::optional<triangle_witness<typename Domain::point_type>> find_triangle_violation(
    Dist&& D, const Domain& dom, std::span<const typename Domain::point_type> sample,
    double tol) {
    if (sample.size() < 3) throw domain_error("find_triangle_violation: need >= 3 sample points");
    for (const auto& p : sample) detail::require_in_domain(dom, p, "find_triangle_violation");

    const std::size_t n = sample.size();
    double best_gap = tol;
    std::optional<triangle_witness<typename Domain::point_type>> best;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                if (i == j || j == k || i == k) continue;
                const double lhs = D(sample[i], sample[j]);
                const double rhs = D(sample[i], sample[k]) + D(sample[k], sample[j]);
                if (lhs - rhs > best_gap) {
                    best_gap = lhs - rhs;
                    best = triangle_witness<typename Domain::point_type>{
                        sample[i], sample[j], sample[k], lhs, rhs, lhs - rhs};
                }
            }
    return best;
}

/// Average two perturbations of the same base distance:
/// (X, D, P) and (X, D, Q) combine into (X, D, (P+Q)/2). The base
/// distances are required to agree on the sampled pairs.
template <point_domain Domain>
perturbed_metric<Domain> average_perturbations(
    const perturbed_metric<Domain>& m1, const perturbed_metric<Domain>& m2,
    std::span<const typename Domain::point_type> sample, double tol = 1e-12) {
    for (std::size_t i = 0; i < sample.size(); ++i)
        for (std::size_t j = 0; j < sample.size(); ++j) {
            const double a = m1.D(sample[i], sample[j]);
            const double b = m2.D(sample[i], sample[j]);
            if (std::abs(a - b) > tol)
                throw mismatched_base("average_perturbations: base distances differ at (" +
                                      m1.domain.repr(sample[i]) + ", " +
                                      m1.domain.repr(sample[j]) + "): " + repr_double(a) +
                                      " vs " + repr_double(b));
        }
    perturbed_metric<Domain> out = m1;
    out.P = [P = m1.P, Q = m2.P](const auto& x, const auto& y) {
        return 0.5 * (P(x, y) + Q(x, y));
    };
    return out;
}

/// (X, alpha*D, alpha*P) is again a perturbed metric space for alpha > 0.
template <point_domain Domain>
perturbed_metric<Domain> scale(double alpha, const perturbed_metric<Domain>& m) {
    if (!(alpha > 0.0))
        throw invalid_scale("scale: alpha must be positive, got " + repr_double(alpha));
    perturbed_metric<Domain> out = m;
    out.D = [alpha, D = m.D](const auto& x, const auto& y) { return alpha * D(x, y); };
    out.P = [alpha, P = m.P](const auto& x, const auto& y) { return alpha * P(x, y); };
    return out;
}

}  // namespace pfx
