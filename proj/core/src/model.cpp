#include "fracheat/model.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "fracheat/errors.hpp"

namespace fracheat {

namespace {

double parse_number(std::string_view text, std::string_view descriptor) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
    throw DomainError("malformed initial condition '" + std::string(descriptor) + "'");
  }
  return value;
}

}  // namespace

InitialCondition InitialCondition::constant(double c) {
  if (!std::isfinite(c)) throw DomainError("constant initial condition must be finite");
  return {Kind::constant, c, 0.0};
}

InitialCondition InitialCondition::gaussian_bump(double amplitude, double width) {
  if (!std::isfinite(amplitude) || !(width > 0.0) || !std::isfinite(width)) {
    throw DomainError("gaussian bump needs finite amplitude and positive width");
  }
  return {Kind::gaussian_bump, amplitude, width};
}

InitialCondition InitialCondition::cosine(double frequency) {
  if (!std::isfinite(frequency)) throw DomainError("cosine frequency must be finite");
  return {Kind::cosine, frequency, 0.0};
}

InitialCondition InitialCondition::parse(std::string_view descriptor) {
  const auto colon = descriptor.find(':');
  if (colon == std::string_view::npos) {
    throw DomainError("initial condition '" + std::string(descriptor) +
                      "' must look like const:<c>, gauss:<amp>,<width> or cos:<k>");
  }
  const auto tag = descriptor.substr(0, colon);
  const auto body = descriptor.substr(colon + 1);
  if (tag == "const") return constant(parse_number(body, descriptor));
  if (tag == "cos") return cosine(parse_number(body, descriptor));
  if (tag == "gauss") {
    const auto comma = body.find(',');
    if (comma == std::string_view::npos) {
      throw DomainError("gauss initial condition needs '<amp>,<width>'");
    }
    return gaussian_bump(parse_number(body.substr(0, comma), descriptor),
                         parse_number(body.substr(comma + 1), descriptor));
  }
  throw DomainError("unknown initial condition tag '" + std::string(tag) + "'");
}

double InitialCondition::operator()(std::span<const double> x) const {
  switch (kind_) {
    case Kind::constant:
      return a_;
    case Kind::gaussian_bump: {
      double r2 = 0.0;
      for (double xi : x) r2 += xi * xi;
      return a_ * std::exp(-r2 / (2.0 * b_ * b_));
    }
    case Kind::cosine:
      return std::cos(a_ * (x.empty() ? 0.0 : x[0]));
  }
  return 0.0;
}

double InitialCondition::operator()(double x) const {
  return (*this)(std::span<const double>(&x, 1));
}

double InitialCondition::sup_norm() const noexcept {
  switch (kind_) {
    case Kind::constant:
    case Kind::gaussian_bump:
      return std::abs(a_);
    case Kind::cosine:
      return 1.0;
  }
  return 0.0;
}

std::string InitialCondition::descriptor() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::constant:
      os << "const:" << a_;
      break;
    case Kind::gaussian_bump:
      os << "gauss:" << a_ << ',' << b_;
      break;
    case Kind::cosine:
      os << "cos:" << a_;
      break;
  }
  return os.str();
}

void ModelParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("alpha must lie in (0, 2]");
  if (d < 1) throw DomainError("dimension d must be >= 1");
  if (!(t_horizon > 0.0) || !std::isfinite(t_horizon)) {
    throw DomainError("time horizon t must be positive and finite");
  }
  if (x_point.size() != static_cast<std::size_t>(d)) {
    throw DomainError("evaluation point x must have d coordinates");
  }
  if (c_alpha != kStableScale) throw DomainError("c_alpha is fixed to 1/2");
}

}  // namespace fracheat
