#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pfx/domain.hpp"
#include "pfx/errors.hpp"
#include "pfx/gauge.hpp"
#include "pfx/metric.hpp"

namespace pfx {

/// Outcome of checking tau + F(D(Tx,Ty)) <= F(D(x,y)) over sampled pairs.
/// margin(x,y) = F(D(x,y)) - F(D(Tx,Ty)) - tau; certification requires
/// every margin >= -tol. Pairs with D(Tx,Ty) below the zero threshold are
/// skipped: the defining inequality is conditional on D(Tx,Ty) > 0.
template <class Point>
struct cert_report {
    bool certified = false;
    double tau = 0.0;
    double worst_margin = std::numeric_limits<double>::infinity();
    std::optional<std::pair<Point, Point>> worst_pair;
    std::size_t pairs_checked = 0;
    std::size_t pairs_skipped_zero = 0;
};

namespace detail {

// F(D(x,y)) - F(D(Tx,Ty)) for one pair; nullopt when the pair is skipped.
template <point_domain Domain>
std::optional<double> pair_gauge_drop(const self_map<Domain>& T,
                                      const perturbed_metric<Domain>& m, const f_gauge& g,
                                      const typename Domain::point_type& x,
                                      const typename Domain::point_type& y) {
    const double d_image = m.D(T(x), T(y));
    if (d_image <= zero_distance_threshold) return std::nullopt;
    const double d_source = m.D(x, y);
    if (d_source <= zero_distance_threshold) {
        if (!m.domain.equal(x, y, m.point_tol))
            throw non_positive_argument("certify: D(x,y) = " + repr_double(d_source) +
                                        " for distinct points (" + m.domain.repr(x) + ", " +
                                        m.domain.repr(y) + "); not a perturbed metric");
        // x = y with D(x,y) = 0 but D(Tx,Ty) > 0: F(D(x,y)) is undefined,
        // so the inequality cannot hold for any tau.
        throw non_positive_argument("certify: zero source distance with positive image "
                                    "distance at coincident pair " + m.domain.repr(x));
    }
    return eval_gauge(g, d_source) - eval_gauge(g, d_image);
}

}  // namespace detail

/// Certify the contraction inequality at a fixed tau over sampled pairs.
template <point_domain Domain>
cert_report<typename Domain::point_type> certify_f_perturbed(
    const self_map<Domain>& T, const perturbed_metric<Domain>& m, const f_gauge& g, double tau,
    std::span<const std::pair<typename Domain::point_type, typename Domain::point_type>> pairs,
    double tol = 1e-9) {
    if (!(tau > 0.0)) throw domain_error("certify_f_perturbed: tau must be positive");
    if (tol < 0.0) throw domain_error("certify_f_perturbed: negative tolerance");

    cert_report<typename Domain::point_type> report;
    report.tau = tau;
    for (const auto& [x, y] : pairs) {
        const auto drop = detail::pair_gauge_drop(T, m, g, x, y);
        if (!drop) {
            ++report.pairs_skipped_zero;
            continue;
        }
        ++report.pairs_checked;
        const double margin = *drop - tau;
        if (margin < report.worst_margin) {
            report.worst_margin = margin;
            report.worst_pair = {x, y};
        }
    }
    report.certified = report.pairs_checked > 0 && report.worst_margin >= -tol;
    return report;
}

/// Largest tau the sampled pairs allow: inf over eligible pairs of
/// F(D(x,y)) - F(D(Tx,Ty)). This is an infimum over a finite grid, so it
/// upper-bounds the supremal tau only on that grid; certification at any
/// tau < the returned value succeeds on the same pairs with tol = 0.
template <point_domain Domain>
double estimate_tau_max(
    const self_map<Domain>& T, const perturbed_metric<Domain>& m, const f_gauge& g,
    std::span<const std::pair<typename Domain::point_type, typename Domain::point_type>> pairs) {
    double inf = std::numeric_limits<double>::infinity();
    std::size_t eligible = 0;
    for (const auto& [x, y] : pairs) {
        const auto drop = detail::pair_gauge_drop(T, m, g, x, y);
        if (!drop) continue;
        ++eligible;
        inf = std::min(inf, *drop);
    }
    if (eligible == 0)
        throw no_eligible_pairs("estimate_tau_max: every sampled pair has zero image distance");
    return inf;
}

/// Sampled constants a_n with D(T^n x, T^n y) <= a_n D(x, y), plus their
/// partial sums and a tail-ratio convergence verdict for sum(a_n).
struct series_estimate {
    std::vector<double> a;             // a[i] is a_{i+1}
    std::vector<double> partial_sums;
    bool convergent_flag = false;
};

/// Estimate a_n = max over pairs (x != y) of D(T^n x, T^n y) / D(x, y)
/// by iterating T. The convergence verdict is a heuristic: every ratio
/// a_{n+1}/a_n over the last ceil(n_max/2) terms must stay below
/// tail_ratio_threshold.
template <point_domain Domain>
series_estimate estimate_series(
    const self_map<Domain>& T, const perturbed_metric<Domain>& m,
    std::span<const std::pair<typename Domain::point_type, typename Domain::point_type>> pairs,
    std::size_t n_max, double tail_ratio_threshold = 0.95) {
    if (n_max < 1) throw domain_error("estimate_series: n_max must be >= 1");

    series_estimate est;
    est.a.assign(n_max, 0.0);

    for (const auto& [x0, y0] : pairs) {
        const double base = m.D(x0, y0);
        if (base <= zero_distance_threshold) continue;  // x = y contributes nothing
        auto x = x0;
        auto y = y0;
        for (std::size_t n = 1; n <= n_max; ++n) {
            x = T(x);
            y = T(y);
            if (!T.domain.contains(x) || !T.domain.contains(y))
                throw overflow_guard("estimate_series: iterate left the domain at n = " +
                                     std::to_string(n));
            est.a[n - 1] = std::max(est.a[n - 1], m.D(x, y) / base);
        }
    }

    est.partial_sums.resize(n_max);
    double sum = 0.0;
    for (std::size_t n = 0; n < n_max; ++n) {
        sum += est.a[n];
        est.partial_sums[n] = sum;
    }

    // Tail ratio test over the last ceil(n_max/2) terms.
    const std::size_t tail_len = (n_max + 1) / 2;
    const std::size_t start = n_max - tail_len;
    bool ok = n_max >= 2;
    for (std::size_t n = (start == 0 ? 1 : start); n < n_max && ok; ++n) {
        if (est.a[n - 1] <= 0.0)
            ok = est.a[n] <= 0.0;
        else
            ok = est.a[n] / est.a[n - 1] < tail_ratio_threshold;
    }
    est.convergent_flag = ok;
    return est;
}

/// All ordered pairs (including coincident ones) over a point grid.
template <class Point>
std::vector<std::pair<Point, Point>> cartesian_pairs(std::span<const Point> grid) {
    std::vector<std::pair<Point, Point>> pairs;
    pairs.reserve(grid.size() * grid.size());
    for (const auto& x : grid)
        for (const auto& y : grid) pairs.emplace_back(x, y);
    return pairs;
}

}  // namespace pfx
