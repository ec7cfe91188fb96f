#pragma once

#include <stdexcept>
#include <string>

namespace pfx {

/// Base class for all library errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Domain / metric errors
struct domain_error : error { using error::error; };
struct negative_exact_distance : error { using error::error; };
struct mismatched_base : error { using error::error; };
struct invalid_scale : error { using error::error; };

// Gauge / certification errors
struct non_positive_argument : error { using error::error; };
struct no_eligible_pairs : error { using error::error; };
struct overflow_guard : error { using error::error; };

// Iteration errors
struct insufficient_data : error { using error::error; };

// Function-space errors
struct shape_mismatch : error { using error::error; };
struct non_finite_value : error { using error::error; };

// Spec / expression errors
struct parse_error : error { using error::error; };
struct validation_error : error { using error::error; };
struct unknown_variable : error { using error::error; };
struct eval_domain_error : error { using error::error; };

}  // namespace pfx
