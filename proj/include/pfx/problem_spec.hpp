#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pfx/domain.hpp"
#include "pfx/errors.hpp"
#include "pfx/expr.hpp"
#include "pfx/gauge.hpp"

namespace pfx {

enum class problem_kind { metric_audit, gauge_audit, certify, iterate, series, bvp };

inline const char* to_string(problem_kind k) {
    switch (k) {
        case problem_kind::metric_audit: return "metric_audit";
        case problem_kind::gauge_audit: return "gauge_audit";
        case problem_kind::certify: return "certify";
        case problem_kind::iterate: return "iterate";
        case problem_kind::series: return "series";
        case problem_kind::bvp: return "bvp";
    }
    return "?";
}

/// A fully validated problem declaration from a spec file.
///
/// File format: optional comments ('#') and blank lines, one section
/// header [kind] naming the problem kind, then one `key = value` per
/// line. Unknown keys are rejected. Expression values use the grammar in
/// expr.hpp; numeric values may be any constant expression.
struct problem_spec {
    problem_kind kind = problem_kind::metric_audit;
    std::map<std::string, std::string> expressions;  // validated source text
    std::map<std::string, double> scalars;
    interval_domain domain{0.0, 1.0};
    std::uint64_t seed = 0;

    double scalar_or(const std::string& key, double fallback) const {
        auto it = scalars.find(key);
        return it == scalars.end() ? fallback : it->second;
    }

    std::size_t count_or(const std::string& key, std::size_t fallback) const {
        auto it = scalars.find(key);
        return it == scalars.end() ? fallback : static_cast<std::size_t>(it->second);
    }

    bool has(const std::string& key) const {
        return expressions.count(key) > 0 || scalars.count(key) > 0;
    }
};

namespace detail {

struct key_rule {
    const char* name;
    bool required;
    bool is_expr;
    const char* vars;  // comma-free variable list for expression keys, e.g. "xy"
};

inline const std::vector<key_rule>& rules_for(problem_kind k) {
    static const std::vector<key_rule> metric_audit = {
        {"D", true, true, "xy"},  {"P", true, true, "xy"},    {"domain", false, false, ""},
        {"tol", false, false, ""}, {"sample_points", false, false, ""},
        {"seed", false, false, ""}};
    static const std::vector<key_rule> gauge_audit = {
        {"F", true, true, "t"},        {"k", false, false, ""},
        {"M", false, false, ""},       {"eps", false, false, ""},
        {"grid_min", false, false, ""}, {"grid_max", false, false, ""},
        {"grid_points", false, false, ""}, {"seed", false, false, ""}};
    static const std::vector<key_rule> certify = {
        {"D", true, true, "xy"},  {"P", true, true, "xy"}, {"T", true, true, "x"},
        {"F", true, true, "t"},   {"tau", true, false, ""}, {"domain", false, false, ""},
        {"grid", false, false, ""}, {"tol", false, false, ""}, {"seed", false, false, ""}};
    static const std::vector<key_rule> iterate = {
        {"D", true, true, "xy"},   {"P", true, true, "xy"},  {"T", true, true, "x"},
        {"x0", true, true, ""},    {"F", false, true, "t"},  {"tau", false, false, ""},
        {"domain", false, false, ""}, {"tol", false, false, ""},
        {"max_iters", false, false, ""}, {"seed", false, false, ""}};
    static const std::vector<key_rule> series = {
        {"D", true, true, "xy"},  {"P", true, true, "xy"},   {"T", true, true, "x"},
        {"n_max", false, false, ""}, {"domain", false, false, ""},
        {"grid", false, false, ""},  {"seed", false, false, ""}};
    static const std::vector<key_rule> bvp = {
        {"f", true, true, "su"},   {"u0", false, true, "t"}, {"tau", true, false, ""},
        {"n_nodes", false, false, ""}, {"tol", false, false, ""},
        {"max_iters", false, false, ""}, {"seed", false, false, ""}};
    switch (k) {
        case problem_kind::metric_audit: return metric_audit;
        case problem_kind::gauge_audit: return gauge_audit;
        case problem_kind::certify: return certify;
        case problem_kind::iterate: return iterate;
        case problem_kind::series: return series;
        case problem_kind::bvp: return bvp;
    }
    return metric_audit;
}

inline std::vector<std::string> var_names(const std::string& compact) {
    std::vector<std::string> out;
    for (char c : compact) out.emplace_back(1, c);
    return out;
}

inline std::optional<problem_kind> kind_from_name(const std::string& name) {
    for (auto k : {problem_kind::metric_audit, problem_kind::gauge_audit, problem_kind::certify,
                   problem_kind::iterate, problem_kind::series, problem_kind::bvp})
        if (name == to_string(k)) return k;
    return std::nullopt;
}

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

inline double eval_constant(const std::string& text, const std::string& field) {
    try {
        auto e = parse_expr(text, std::span<const std::string>{});
        return eval_expr(e, {});
    } catch (const error& ex) {
        throw validation_error("field '" + field + "': " + ex.what());
    }
}

inline std::size_t require_count(const problem_spec& spec, const std::string& field,
                                 double min_value, std::size_t fallback) {
    const double v = spec.scalar_or(field, static_cast<double>(fallback));
    if (v != std::floor(v) || v < min_value)
        throw validation_error("field '" + field + "': must be an integer >= " +
                               repr_double(min_value) + ", got " + repr_double(v));
    return static_cast<std::size_t>(v);
}

}  // namespace detail

/// Parse and validate a spec document. ParseError carries line/column;
/// ValidationError carries the offending field.
inline problem_spec parse_spec(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;

    problem_spec spec;
    bool have_kind = false;
    std::set<std::string> seen;

    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = detail::trim(line.substr(0, line.find('#')));
        if (stripped.empty()) continue;

        if (stripped.front() == '[') {
            if (stripped.back() != ']')
                throw parse_error("line " + std::to_string(line_no) + ", column " +
                                  std::to_string(stripped.size()) + ": missing ']'");
            if (have_kind)
                throw parse_error("line " + std::to_string(line_no) +
                                  ": duplicate section header");
            const std::string name = detail::trim(stripped.substr(1, stripped.size() - 2));
            const auto kind = detail::kind_from_name(name);
            if (!kind)
                throw validation_error("unknown problem kind '" + name + "'");
            spec.kind = *kind;
            have_kind = true;
            continue;
        }

        if (!have_kind)
            throw parse_error("line " + std::to_string(line_no) +
                              ": expected a [kind] section header first");

        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw parse_error("line " + std::to_string(line_no) + ", column " +
                              std::to_string(stripped.size()) + ": expected 'key = value'");
        const std::string key = detail::trim(stripped.substr(0, eq));
        const std::string value = detail::trim(stripped.substr(eq + 1));
        if (key.empty() || value.empty())
            throw parse_error("line " + std::to_string(line_no) + ": empty key or value");

        const auto& rules = detail::rules_for(spec.kind);
        const detail::key_rule* rule = nullptr;
        for (const auto& r : rules)
            if (key == r.name) rule = &r;
        if (!rule)
            throw validation_error("unknown key '" + key + "' for kind " +
                                   to_string(spec.kind));
        if (!seen.insert(key).second)
            throw validation_error("duplicate key '" + key + "'");

        if (rule->is_expr) {
            // Gauge expressions may also name a builtin.
            if (std::string(rule->name) == "F" && gauges::by_name(value)) {
                spec.expressions[key] = value;
                continue;
            }
            try {
                const auto vars = detail::var_names(rule->vars);
                (void)parse_expr(value, std::span<const std::string>(vars));
            } catch (const error& ex) {
                throw validation_error("field '" + key + "' (line " + std::to_string(line_no) +
                                       "): " + ex.what());
            }
            spec.expressions[key] = value;
        } else if (key == "domain") {
            // "[a, b]"
            const std::string v = value;
            if (v.size() < 5 || v.front() != '[' || v.back() != ']' ||
                v.find(',') == std::string::npos)
                throw validation_error("field 'domain': expected \"[lo, hi]\", got \"" + v +
                                       "\"");
            const std::size_t comma = v.find(',');
            const double lo = detail::eval_constant(detail::trim(v.substr(1, comma - 1)), "domain");
            const double hi =
                detail::eval_constant(detail::trim(v.substr(comma + 1, v.size() - comma - 2)),
                                      "domain");
            if (!(lo < hi)) throw validation_error("field 'domain': need lo < hi");
            spec.domain = interval_domain(lo, hi);
        } else if (key == "seed") {
            const double v = detail::eval_constant(value, key);
            if (v != std::floor(v) || v < 0.0)
                throw validation_error("field 'seed': must be a nonnegative integer");
            spec.seed = static_cast<std::uint64_t>(v);
        } else {
            spec.scalars[key] = detail::eval_constant(value, key);
        }
    }

    if (!have_kind) throw parse_error("line 1: missing [kind] section header");

    // Required keys.
    for (const auto& r : detail::rules_for(spec.kind))
        if (r.required && !seen.count(r.name))
            throw validation_error(std::string("missing required field '") + r.name + "' for " +
                                   to_string(spec.kind));

    // Range checks.
    if (spec.scalars.count("tau") && !(spec.scalars["tau"] > 0.0))
        throw validation_error("field 'tau': must be positive");
    if (spec.scalars.count("tol") && !(spec.scalars["tol"] > 0.0))
        throw validation_error("field 'tol': must be positive");
    if (spec.scalars.count("k") &&
        !(spec.scalars["k"] > 0.0 && spec.scalars["k"] < 1.0))
        throw validation_error("field 'k': must lie in (0, 1)");
    if (spec.scalars.count("eps") && !(spec.scalars["eps"] > 0.0))
        throw validation_error("field 'eps': must be positive");
    if (spec.scalars.count("M") && !(spec.scalars["M"] > 0.0))
        throw validation_error("field 'M': must be positive");
    (void)detail::require_count(spec, "max_iters", 1, 10000);
    (void)detail::require_count(spec, "grid", 2, 200);
    (void)detail::require_count(spec, "n_max", 1, 10);
    (void)detail::require_count(spec, "sample_points", 1, 41);
    (void)detail::require_count(spec, "grid_points", 2, 200);
    const std::size_t n_nodes = detail::require_count(spec, "n_nodes", 3, 201);
    if (spec.kind == problem_kind::bvp && n_nodes % 2 == 0)
        throw validation_error("field 'n_nodes': must be odd");
    if (spec.kind == problem_kind::gauge_audit) {
        const double gmin = spec.scalar_or("grid_min", 1e-12);
        const double gmax = spec.scalar_or("grid_max", 10.0);
        if (!(gmin > 0.0 && gmin < gmax))
            throw validation_error("field 'grid_min': need 0 < grid_min < grid_max");
    }
    return spec;
}

/// Resolve a gauge declaration: builtin name or expression in t.
inline f_gauge gauge_from_spec(const std::string& text) {
    if (auto g = gauges::by_name(text)) return *g;
    const std::vector<std::string> vars = {"t"};
    auto e = parse_expr(text, std::span<const std::string>(vars));
    return f_gauge{text, [e](double t) { return eval_expr(e, std::span(&t, 1)); }, 0.5};
}

}  // namespace pfx
