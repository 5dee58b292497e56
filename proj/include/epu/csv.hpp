#pragma once

#include <string>
#include <vector>

namespace epu {

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(const std::string& s);

/// Splits one CSV line, honouring double-quoted fields.
std::vector<std::string> split_csv(const std::string& line);

}  // namespace epu
