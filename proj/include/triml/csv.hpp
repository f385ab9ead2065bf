#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "triml/types.hpp"

namespace triml::csv {

/// 17 significant digits, '.' decimal point, no locale.
std::string format(Real x);

/// Whole-field parse; throws DomainError on anything else.
Real parse(std::string_view field);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index by header name, or throws DomainError.
    std::size_t column(std::string_view name) const;
};

/// Comma-separated, first line is the header.  Blank lines are skipped and
/// surrounding whitespace is trimmed.  Throws IoError when unreadable.
Table read(const std::string& path);

/// Writes `content` to `path` through a temporary file in the same
/// directory and a rename, so a failed run leaves no partial file.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace triml::csv
