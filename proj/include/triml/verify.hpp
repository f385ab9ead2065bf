#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "triml/types.hpp"

namespace triml {

/// Cross-module consistency checks behind `triml verify`.
struct CheckOutcome {
    std::string name;
    Real max_err = 0;
    Real tol = 0;
    bool pass = false;
    /// Exception text when the check could not run to completion.
    std::string message;
};

/// Names in run order.
const std::vector<std::string>& verify_check_names();

/// Runs one check; `tol` replaces its default tolerance.  Unknown names
/// throw DomainError.  Library errors inside a check are reported as a
/// failed outcome with max_err = inf.
CheckOutcome run_verify_check(std::string_view name, std::optional<Real> tol = {});

}  // namespace triml
