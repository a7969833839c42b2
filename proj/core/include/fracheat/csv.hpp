#pragma once

#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace fracheat::csv {

void write_header(std::ostream& os, const std::vector<std::string>& columns);
/// Writes values with round-trip precision, comma separated.
void write_row(std::ostream& os, std::span<const double> values);
void write_row(std::ostream& os, std::initializer_list<double> values);

}  // namespace fracheat::csv
