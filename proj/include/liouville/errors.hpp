#pragma once

#include <stdexcept>
#include <string>

namespace liouville {

// Base class for all domain-level failures raised by this library.
struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Argument outside an operation's mathematical domain.
struct domain_error : error {
    explicit domain_error(const std::string& msg) : error(msg) {}
};

// Evaluation requested within delta_lc of a coincidence singularity.
struct singular_point : domain_error {
    explicit singular_point(const std::string& msg) : domain_error(msg) {}
};

// Evaluation requested within delta_lc of the light-cone set t +- x in 2Z.
struct light_cone_point : domain_error {
    explicit light_cone_point(const std::string& msg) : domain_error(msg) {}
};

// A pair of insertions violates the non-light-cone condition.
struct light_cone_violation : domain_error {
    explicit light_cone_violation(const std::string& msg) : domain_error(msg) {}
};

// -sum(alpha)/b is not an integer within tolerance.
struct non_integer_screening : domain_error {
    explicit non_integer_screening(const std::string& msg) : domain_error(msg) {}
};

// Two insertions coincide (geodesic distance below delta_lc).
struct singular_configuration : domain_error {
    explicit singular_configuration(const std::string& msg) : domain_error(msg) {}
};

// Smeared charge index outside the admissible set I_b.
struct charge_out_of_range : domain_error {
    explicit charge_out_of_range(const std::string& msg) : domain_error(msg) {}
};

// Support boxes fail the spacelike-separation precondition.
struct not_spacelike : domain_error {
    explicit not_spacelike(const std::string& msg) : domain_error(msg) {}
};

// Monte Carlo integrand produced NaN/Inf, or the sample failure rate
// exceeded the configured threshold.
struct mc_abort : error {
    explicit mc_abort(const std::string& msg) : error(msg) {}
};

// Internal invariant violated (e.g. a log argument left the right half-plane,
// which the continuation theory guarantees cannot happen).
struct internal_error : error {
    explicit internal_error(const std::string& msg) : error(msg) {}
};

} // namespace liouville
