#pragma once

#include <vector>

namespace resonate {

// Forcing phase
//   S(t) = s0 t + sum_{j=1}^{q-1} s_j t^{1-j/q} + s_q log t,   t >= 1,
// so S'(t) -> s0 with |S'(t) - s0| = O(t^{-1/q}).
class PhaseSchedule {
 public:
  // s holds s_0 ... s_q (exactly q+1 entries, s_0 > 0, q >= 1).
  PhaseSchedule(int q, std::vector<double> s);

  double value(double t) const;  // S(t)
  double rate(double t) const;   // S'(t), exact derivative

  int q() const { return q_; }
  double s(int j) const { return s_[static_cast<std::size_t>(j)]; }
  const std::vector<double>& coefficients() const { return s_; }

  // s_{k/2} with the conventions s_j = 0 for j > q and s_{k/2} = 0 for odd k.
  double s_half(int k) const;

 private:
  int q_;
  std::vector<double> s_;
};

}  // namespace resonate
