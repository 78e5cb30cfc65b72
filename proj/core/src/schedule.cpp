#include "resonate/schedule.hpp"

#include <cmath>

#include "resonate/errors.hpp"

namespace resonate {

PhaseSchedule::PhaseSchedule(int q, std::vector<double> s) : q_(q), s_(std::move(s)) {
  if (q_ < 1) throw ConfigError("schedule.q must be a positive integer");
  if (s_.size() != static_cast<std::size_t>(q_ + 1)) {
    throw ConfigError("schedule.s must have exactly q+1 entries s_0..s_q");
  }
  if (!(s_[0] > 0.0)) throw ConfigError("schedule.s[0] must be positive");
}

namespace {
void check_time(double t) {
  if (!(t >= 1.0)) throw DomainError("schedule is evaluated for t >= 1");
}
}  // namespace

double PhaseSchedule::value(double t) const {
  check_time(t);
  double out = s_[0] * t;
  for (int j = 1; j <= q_ - 1; ++j) {
    out += s_[static_cast<std::size_t>(j)] * std::pow(t, 1.0 - double(j) / q_);
  }
  out += s_[static_cast<std::size_t>(q_)] * std::log(t);
  return out;
}

double PhaseSchedule::rate(double t) const {
  check_time(t);
  double out = s_[0];
  for (int j = 1; j <= q_ - 1; ++j) {
    const double e = double(j) / q_;
    out += s_[static_cast<std::size_t>(j)] * (1.0 - e) * std::pow(t, -e);
  }
  out += s_[static_cast<std::size_t>(q_)] / t;
  return out;
}

double PhaseSchedule::s_half(int k) const {
  if (k % 2 != 0) return 0.0;
  const int j = k / 2;
  if (j > q_) return 0.0;
  return s_[static_cast<std::size_t>(j)];
}

}  // namespace resonate
