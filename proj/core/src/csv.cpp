#include "fracheat/csv.hpp"

#include <charconv>

namespace fracheat::csv {

void write_header(std::ostream& os, const std::vector<std::string>& columns) {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) os << ',';
    os << columns[i];
  }
  os << '\n';
}

void write_row(std::ostream& os, std::span<const double> values) {
  char buf[32];
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) os << ',';
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, values[i]);
    (void)ec;
    os.write(buf, end - buf);
  }
  os << '\n';
}

void write_row(std::ostream& os, std::initializer_list<double> values) {
  write_row(os, std::span<const double>(values.begin(), values.size()));
}

}  // namespace fracheat::csv
