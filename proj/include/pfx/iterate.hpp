#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pfx/certify.hpp"
#include "pfx/domain.hpp"
#include "pfx/errors.hpp"
#include "pfx/gauge.hpp"
#include "pfx/metric.hpp"

namespace pfx {

enum class stop_reason {
    fixed_point,    // T x_n == x_n exactly
    tolerance_met,  // d(x_{n+1}, x_n) < tol
    max_iters,
    domain_exit,    // T x_n left the declared domain; trace keeps x_n
};

inline const char* to_string(stop_reason r) {
    switch (r) {
        case stop_reason::fixed_point: return "fixed_point";
        case stop_reason::tolerance_met: return "tolerance_met";
        case stop_reason::max_iters: return "max_iters";
        case stop_reason::domain_exit: return "domain_exit";
    }
    return "?";
}

/// Full record of a Picard run. For every step n:
///   gamma[n]       = D(x_{n+1}, x_n)   (the proof's gamma_n)
///   exact_steps[n] = d(x_{n+1}, x_n)
///   f_gamma[n]     = F(gamma[n]) while gamma[n] stays above the zero
///                    threshold and a gauge was supplied (NaN otherwise).
template <class Point>
struct iteration_trace {
    std::vector<Point> points;
    std::vector<double> gamma;
    std::vector<double> exact_steps;
    std::vector<double> f_gamma;
    stop_reason reason = stop_reason::max_iters;

    std::size_t steps() const { return gamma.size(); }
    const Point& final_point() const { return points.back(); }
};

/// Run x_{n+1} = T x_n from x0, recording proof diagnostics.
///
/// Stopping order per step: exact fixed point first (x_{n+1} == x_n,
/// zero-tolerance equality), then d(x_{n+1}, x_n) < tol. Convergence is
/// judged in the exact metric d, matching perturbed convergence.
template <point_domain Domain>
iteration_trace<typename Domain::point_type> iterate(
    const self_map<Domain>& T, const typename Domain::point_type& x0,
    const perturbed_metric<Domain>& m, double tol = 1e-12, std::size_t max_iters = 10000,
    const std::optional<f_gauge>& gauge = std::nullopt) {
    if (!(tol > 0.0)) throw domain_error("iterate: tol must be positive");
    if (max_iters < 1) throw domain_error("iterate: max_iters must be >= 1");
    detail::require_in_domain(m.domain, x0, "iterate");

    iteration_trace<typename Domain::point_type> trace;
    trace.points.push_back(x0);
    trace.reason = stop_reason::max_iters;

    for (std::size_t n = 0; n < max_iters; ++n) {
        const auto& x = trace.points.back();
        auto x_next = T(x);
        if (!m.domain.contains(x_next)) {
            trace.reason = stop_reason::domain_exit;
            return trace;
        }

        const double g = m.D(x_next, x);
        const double d = g - m.P(x_next, x);
        trace.gamma.push_back(g);
        trace.exact_steps.push_back(d);
        if (gauge && g > zero_distance_threshold)
            trace.f_gamma.push_back(gauge->eval(g));
        else
            trace.f_gamma.push_back(std::numeric_limits<double>::quiet_NaN());

        const bool exact_fixed = m.domain.equal(x_next, x, 0.0);
        trace.points.push_back(std::move(x_next));
        if (exact_fixed) {
            trace.reason = stop_reason::fixed_point;
            return trace;
        }
        if (d < tol) {
            trace.reason = stop_reason::tolerance_met;
            return trace;
        }
    }
    return trace;
}

struct gamma_decay_result {
    bool ok = true;
    std::optional<std::size_t> first_failure;  // smallest n violating the bound
};

/// Check the proof inequality F(gamma_n) <= F(gamma_0) - n*tau + tol for
/// every recorded n with gamma_n above the zero threshold.
template <class Point>
gamma_decay_result check_gamma_decay(const iteration_trace<Point>& trace, const f_gauge& g,
                                     double tau, double tol = 0.0) {
    if (trace.gamma.size() < 2)
        throw insufficient_data("check_gamma_decay: need at least 2 gamma entries");
    if (!(tau > 0.0)) throw domain_error("check_gamma_decay: tau must be positive");

    gamma_decay_result result;
    if (trace.gamma[0] <= zero_distance_threshold) return result;  // vacuous: gamma_0 = 0
    const double f0 = eval_gauge(g, trace.gamma[0]);
    for (std::size_t n = 1; n < trace.gamma.size(); ++n) {
        const double gn = trace.gamma[n];
        if (gn <= zero_distance_threshold) {
            // Coincident iterates end the checked range; a positive exact
            // step with non-positive D means the metric is invalid.
            if (trace.exact_steps[n] > zero_distance_threshold)
                throw non_positive_argument("check_gamma_decay: gamma_" + std::to_string(n) +
                                            " <= 0 for distinct iterates");
            break;
        }
        if (eval_gauge(g, gn) > f0 - static_cast<double>(n) * tau + tol) {
            result.ok = false;
            result.first_failure = n;
            break;
        }
    }
    return result;
}

/// Geometric-mean contraction rate of the exact steps over the tail half
/// of the trace. Values below 1 indicate contraction. The head half is
/// discarded to let perturbation transients die out.
template <class Point>
double estimate_rate(const iteration_trace<Point>& trace) {
    std::vector<double> steps;
    for (double s : trace.exact_steps)
        if (s > zero_distance_threshold) steps.push_back(s);
    if (steps.size() < 3)
        throw insufficient_data("estimate_rate: need >= 3 exact steps above the zero threshold");

    const std::size_t first = steps.size() / 2;
    double log_sum = 0.0;
    std::size_t count = 0;
    for (std::size_t n = (first == 0 ? 1 : first); n < steps.size(); ++n) {
        log_sum += std::log(steps[n] / steps[n - 1]);
        ++count;
    }
    return std::exp(log_sum / static_cast<double>(count));
}

}  // namespace pfx
