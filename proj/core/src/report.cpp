#include "resonate/report.hpp"

#include <fstream>
#include <sstream>

#include "resonate/errors.hpp"
#include "resonate/util.hpp"

namespace resonate {

std::string machine_report(const AnalysisBundle& b) {
  std::ostringstream out;
  out << "format = resonate-analysis-1\n";
  out << "system = " << b.scenario.system_name << "\n";
  for (const auto& [key, value] : b.scenario.params) {
    out << "param." << key << " = " << format_g(value) << "\n";
  }
  out << "schedule.q = " << b.scenario.q << "\n";
  out << "schedule.s =";
  for (double v : b.scenario.s) out << ' ' << format_g(v);
  out << "\n";
  out << "resonance.kappa = " << b.res.kappa << "\n";
  out << "resonance.varkappa = " << b.res.varkappa << "\n";
  out << "resonance.a = " << format_g(b.res.a) << "\n";
  out << "resonance.eta = " << format_g(b.res.eta) << "\n";
  out << "resonance.roots =";
  for (double v : b.res.all_roots) out << ' ' << format_g(v);
  out << "\n";
  out << "expansion.orders = " << b.exp.max_order() << "\n";
  out << "expansion.grid = " << b.exp.grid().n_psi << "x" << b.exp.grid().n_s << "\n";
  for (int k = 1; k <= b.exp.max_order(); ++k) {
    out << "expansion.provenance." << k << " = "
        << (b.exp.provenance(k) == OrderProvenance::Generic ? "generic" : "closed-form") << "\n";
    out << "expansion.sup_lambda." << k << " = " << format_g(b.exp.lambda(k).sup_abs()) << "\n";
    out << "expansion.sup_omega." << k << " = " << format_g(b.exp.omega(k).sup_abs()) << "\n";
  }
  out << "orders.n = " << (b.orders.n ? std::to_string(*b.orders.n) : "none") << "\n";
  out << "orders.m = " << (b.orders.m ? std::to_string(*b.orders.m) : "none") << "\n";
  out << "regime.no_locking = " << (b.regime.no_locking ? "true" : "false") << "\n";
  out << "regime.summary = " << b.regime.summary << "\n";
  out << "regime.roots = " << b.regime.roots.size() << "\n";
  for (std::size_t i = 0; i < b.regime.roots.size(); ++i) {
    const auto& rc = b.regime.roots[i];
    const std::string p = "root." + std::to_string(i);
    out << p << ".psi0 = " << format_g(rc.root.psi0) << "\n";
    out << p << ".nu_n = " << format_g(rc.root.nu_n) << "\n";
    out << p << ".lambda_n = " << format_g(rc.root.lambda_n) << "\n";
    out << p << ".omega_m = " << format_g(rc.omega_m) << "\n";
    out << p << ".d_nm = " << format_g(rc.d_nm) << "\n";
    if (rc.h) out << p << ".h = " << *rc.h << "\n";
    if (rc.d_h) out << p << ".d_h = " << format_g(*rc.d_h) << "\n";
    out << p << ".verdict = " << verdict_name(rc.verdict) << "\n";
    out << p << ".criterion = " << rc.criterion << "\n";
    const auto& ra = b.root_analysis[i];
    if (ra.sol) {
      for (std::size_t k = 0; k < ra.sol->coef.size(); ++k) {
        out << p << ".asym.rho" << (k + 1) << " = " << format_g(ra.sol->coef[k][0]) << "\n";
        out << p << ".asym.phi" << (k + 1) << " = " << format_g(ra.sol->coef[k][1]) << "\n";
      }
      out << p << ".asym.partial = " << (ra.sol->partial ? "true" : "false") << "\n";
    }
    if (ra.slopes) {
      out << p << ".asym.slope_rho = " << format_g(ra.slopes->rho) << "\n";
      out << p << ".asym.slope_phi = " << format_g(ra.slopes->phi) << "\n";
    }
  }
  return out.str();
}

std::string text_report(const AnalysisBundle& b, bool with_asymptotics) {
  std::ostringstream out;
  out << "== analysis: " << b.scenario.system_name << " ==\n";
  out << "resonance kappa/varkappa = " << b.res.kappa << "/" << b.res.varkappa
      << ", a = " << format_g(b.res.a) << ", eta = " << format_g(b.res.eta) << "\n";
  out << "expansion orders: " << b.exp.max_order() << " (grid " << b.exp.grid().n_psi << "x"
      << b.exp.grid().n_s << ")\n";
  out << "leading orders: n = " << (b.orders.n ? std::to_string(*b.orders.n) : "none")
      << ", m = " << (b.orders.m ? std::to_string(*b.orders.m) : "none") << "\n";
  if (b.regime.no_locking) {
    out << "verdict: no-locking — " << b.regime.summary << "\n";
    return out.str();
  }
  if (b.regime.roots.empty()) {
    out << "verdict: " << b.regime.summary << "\n";
    return out.str();
  }
  out << "equilibrium phases (" << b.regime.roots.size() << "):\n";
  for (std::size_t i = 0; i < b.regime.roots.size(); ++i) {
    const auto& rc = b.regime.roots[i];
    out << "  psi0 = " << format_g(rc.root.psi0) << "  nu_n = " << format_g(rc.root.nu_n)
        << "  lambda_n = " << format_g(rc.root.lambda_n) << "  d_nm = " << format_g(rc.d_nm);
    if (rc.h) out << "  h = " << *rc.h << "  d_h = " << format_g(*rc.d_h);
    out << "\n    -> " << verdict_name(rc.verdict) << " [" << rc.criterion << "]\n";
    if (with_asymptotics && b.root_analysis[i].sol) {
      const auto& sol = *b.root_analysis[i].sol;
      out << "    asymptotic coefficients:";
      for (std::size_t k = 0; k < sol.coef.size(); ++k) {
        out << " (rho" << k + 1 << ", phi" << k + 1 << ") = (" << format_g(sol.coef[k][0]) << ", "
            << format_g(sol.coef[k][1]) << ")";
      }
      if (sol.partial) out << " [partial]";
      out << "\n";
      if (b.root_analysis[i].slopes) {
        out << "    residual slopes: rho " << format_g(b.root_analysis[i].slopes->rho) << ", phi "
            << format_g(b.root_analysis[i].slopes->phi) << "\n";
      }
    }
  }
  out << "summary: " << b.regime.summary << "\n";
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << content;
}

}  // namespace resonate
