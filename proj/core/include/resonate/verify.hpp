#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace resonate {

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;  // measured quantity
  double bound = 0.0;  // the limit it is checked against
  std::string note;
};

// suite in {specialfn, averaging, classify, asymptotics, integrate, figures, all}
std::vector<CheckResult> verify_suite(const std::string& suite);

// Prints one line per check with its margin; returns the failure count.
int run_verify(const std::string& suite, std::ostream& out);

// Figure-level corroboration checks, shared with the acceptance suite.
CheckResult check_locking_figure();      // stable tube: 10 seeded runs stay locked
CheckResult check_instability_figure();  // unstable tube: >= 9/10 escapes
CheckResult check_truncated_escape();    // sign-definite drift leaves |rho| < 2
CheckResult check_duffing_figure();      // quartic-well run settles at r = a

}  // namespace resonate
