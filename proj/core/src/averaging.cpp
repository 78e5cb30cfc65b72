#include "resonate/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "resonate/errors.hpp"

namespace resonate {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kFitTol = 1e-8;

void require_same_shape(const SpectralField& a, const SpectralField& b) {
  if (a.n_psi() != b.n_psi() || a.n_s() != b.n_s() || a.varkappa() != b.varkappa()) {
    throw std::logic_error("spectral field shape mismatch");
  }
}

}  // namespace

SpectralField::SpectralField(int n_psi, int n_s, int varkappa, double fill)
    : n_psi_(n_psi), n_s_(n_s), varkappa_(varkappa) {
  if (n_psi < 2 || n_s < 2 || (n_psi & (n_psi - 1)) || (n_s & (n_s - 1))) {
    throw ConfigError("spectral grid sizes must be powers of two >= 2");
  }
  data_.assign(std::size_t(n_psi) * n_s, fill);
}

double SpectralField::psi(int i) const { return kTwoPi * i / n_psi_; }
double SpectralField::s(int j) const { return kTwoPi * varkappa_ * j / n_s_; }

std::vector<double> SpectralField::s_mean_profile() const {
  std::vector<double> out(static_cast<std::size_t>(n_psi_), 0.0);
  for (int i = 0; i < n_psi_; ++i) {
    double acc = 0.0;
    for (int j = 0; j < n_s_; ++j) acc += at(i, j);
    out[static_cast<std::size_t>(i)] = acc / n_s_;
  }
  return out;
}

SpectralField SpectralField::psi_derivative() const {
  SpectralField out(n_psi_, n_s_, varkappa_);
  std::vector<std::complex<double>> col(static_cast<std::size_t>(n_psi_));
  for (int j = 0; j < n_s_; ++j) {
    for (int i = 0; i < n_psi_; ++i) col[static_cast<std::size_t>(i)] = at(i, j);
    spectral::fft(col);
    for (int i = 0; i < n_psi_; ++i) {
      const int m = i <= n_psi_ / 2 ? i : i - n_psi_;
      const double w = (i == n_psi_ / 2) ? 0.0 : double(m);
      col[static_cast<std::size_t>(i)] *= std::complex<double>(0.0, w);
    }
    spectral::ifft(col);
    for (int i = 0; i < n_psi_; ++i) out.at(i, j) = col[static_cast<std::size_t>(i)].real();
  }
  return out;
}

SpectralField SpectralField::s_derivative() const {
  SpectralField out(n_psi_, n_s_, varkappa_);
  std::vector<std::complex<double>> row(static_cast<std::size_t>(n_s_));
  for (int i = 0; i < n_psi_; ++i) {
    for (int j = 0; j < n_s_; ++j) row[static_cast<std::size_t>(j)] = at(i, j);
    spectral::fft(row);
    for (int j = 0; j < n_s_; ++j) {
      const int m = j <= n_s_ / 2 ? j : j - n_s_;
      const double w = (j == n_s_ / 2) ? 0.0 : double(m) / varkappa_;
      row[static_cast<std::size_t>(j)] *= std::complex<double>(0.0, w);
    }
    spectral::ifft(row);
    for (int j = 0; j < n_s_; ++j) out.at(i, j) = row[static_cast<std::size_t>(j)].real();
  }
  return out;
}

double SpectralField::max_abs() const {
  double out = 0.0;
  for (double v : data_) out = std::max(out, std::abs(v));
  return out;
}

double SpectralField::fourier_tail() const {
  double tail = 0.0;
  std::vector<std::complex<double>> row(static_cast<std::size_t>(n_s_));
  for (int i = 0; i < n_psi_; ++i) {
    for (int j = 0; j < n_s_; ++j) row[static_cast<std::size_t>(j)] = at(i, j);
    spectral::fft(row);
    for (int j = 0; j < n_s_; ++j) {
      const int m = j <= n_s_ / 2 ? j : j - n_s_;
      if (std::abs(m) > n_s_ / 3) {
        tail = std::max(tail, std::abs(row[static_cast<std::size_t>(j)]) / n_s_);
      }
    }
  }
  std::vector<std::complex<double>> col(static_cast<std::size_t>(n_psi_));
  for (int j = 0; j < n_s_; ++j) {
    for (int i = 0; i < n_psi_; ++i) col[static_cast<std::size_t>(i)] = at(i, j);
    spectral::fft(col);
    for (int i = 0; i < n_psi_; ++i) {
      const int m = i <= n_psi_ / 2 ? i : i - n_psi_;
      if (std::abs(m) > n_psi_ / 3) {
        tail = std::max(tail, std::abs(col[static_cast<std::size_t>(i)]) / n_psi_);
      }
    }
  }
  return tail;
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  require_same_shape(*this, o);
  for (std::size_t n = 0; n < data_.size(); ++n) data_[n] += o.data_[n];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  require_same_shape(*this, o);
  for (std::size_t n = 0; n < data_.size(); ++n) data_[n] -= o.data_[n];
  return *this;
}

SpectralField& SpectralField::operator*=(double c) {
  for (double& v : data_) v *= c;
  return *this;
}

SpectralField hadamard(SpectralField a, const SpectralField& b) {
  require_same_shape(a, b);
  for (std::size_t n = 0; n < a.data_.size(); ++n) a.data_[n] *= b.data_[n];
  return a;
}

std::vector<double> average_over_S(const SpectralField& field) { return field.s_mean_profile(); }

SpectralField solve_homological(const SpectralField& rhs, double s0) {
  if (!(s0 > 0.0)) throw DomainError("solve_homological needs s0 > 0");
  const auto mean = rhs.s_mean_profile();
  double worst = 0.0;
  for (double m : mean) worst = std::max(worst, std::abs(m));
  if (worst > 1e-8) {
    throw std::logic_error("homological right-hand side has nonzero S-mean");
  }

  const int n_s = rhs.n_s();
  SpectralField out(rhs.n_psi(), n_s, rhs.varkappa());
  std::vector<std::complex<double>> row(static_cast<std::size_t>(n_s));
  for (int i = 0; i < rhs.n_psi(); ++i) {
    for (int j = 0; j < n_s; ++j) {
      row[static_cast<std::size_t>(j)] = rhs.at(i, j) - mean[static_cast<std::size_t>(i)];
    }
    spectral::fft(row);
    for (int j = 0; j < n_s; ++j) {
      const int m = j <= n_s / 2 ? j : j - n_s;
      if (m == 0) {
        row[static_cast<std::size_t>(j)] = 0.0;
      } else {
        row[static_cast<std::size_t>(j)] /=
            std::complex<double>(0.0, s0 * double(m) / rhs.varkappa());
      }
    }
    spectral::ifft(row);
    for (int j = 0; j < n_s; ++j) out.at(i, j) = row[static_cast<std::size_t>(j)].real();
  }
  return out;
}

std::vector<double> chebyshev_nodes(int count) {
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] = std::cos((2.0 * i + 1.0) * kPi / (2.0 * count));
  }
  return out;
}

// ---------------------------------------------------------------------------
// PolyField helpers (exact-in-rho representation used inside the engine)
// ---------------------------------------------------------------------------

namespace {

SpectralField zero_field(const SpectralField& like) {
  return SpectralField(like.n_psi(), like.n_s(), like.varkappa());
}

PolyField pf_pad(PolyField p, std::size_t deg_count, const SpectralField& like) {
  while (p.size() < deg_count) p.push_back(zero_field(like));
  return p;
}

PolyField pf_add(const PolyField& a, const PolyField& b, const SpectralField& like) {
  PolyField out = pf_pad(a, std::max(a.size(), b.size()), like);
  for (std::size_t d = 0; d < b.size(); ++d) out[d] += b[d];
  return out;
}

PolyField pf_sub(const PolyField& a, const PolyField& b, const SpectralField& like) {
  PolyField out = pf_pad(a, std::max(a.size(), b.size()), like);
  for (std::size_t d = 0; d < b.size(); ++d) out[d] -= b[d];
  return out;
}

PolyField pf_d_rho(const PolyField& p) {
  PolyField out;
  for (std::size_t d = 1; d < p.size(); ++d) {
    SpectralField f = p[d];
    f *= double(d);
    out.push_back(std::move(f));
  }
  return out;
}

PolyField pf_d_psi(const PolyField& p) {
  PolyField out;
  out.reserve(p.size());
  for (const auto& f : p) out.push_back(f.psi_derivative());
  return out;
}

PolyField pf_mul(const PolyField& a, const PolyField& b, const SpectralField& like) {
  if (a.empty() || b.empty()) return {};
  PolyField out;
  for (std::size_t d = 0; d < a.size() + b.size() - 1; ++d) out.push_back(zero_field(like));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += hadamard(a[i], b[j]);
  }
  return out;
}

// mean over S per degree, kept as fields constant along S
PolyField pf_mean(const PolyField& p) {
  PolyField out;
  for (const auto& f : p) {
    const auto profile = f.s_mean_profile();
    SpectralField m(f.n_psi(), f.n_s(), f.varkappa());
    for (int i = 0; i < f.n_psi(); ++i) {
      for (int j = 0; j < f.n_s(); ++j) m.at(i, j) = profile[static_cast<std::size_t>(i)];
    }
    out.push_back(std::move(m));
  }
  return out;
}

PolyField pf_solve_homological(const PolyField& rhs, double s0) {
  PolyField out;
  out.reserve(rhs.size());
  for (const auto& f : rhs) out.push_back(solve_homological(f, s0));
  return out;
}

// least-squares solve of a tiny Vandermonde system; returns the (deg+1) x n
// projection matrix P with coefficients = P * samples
std::vector<std::vector<double>> vander_projection(const std::vector<double>& nodes, int deg) {
  const int n = static_cast<int>(nodes.size());
  const int m = deg + 1;
  if (n < m) throw std::logic_error("not enough rho nodes for the requested degree");
  // V[i][d] = nodes[i]^d
  std::vector<std::vector<long double>> V(static_cast<std::size_t>(n),
                                          std::vector<long double>(static_cast<std::size_t>(m)));
  for (int i = 0; i < n; ++i) {
    long double p = 1.0L;
    for (int d = 0; d < m; ++d) {
      V[std::size_t(i)][std::size_t(d)] = p;
      p *= nodes[std::size_t(i)];
    }
  }
  // A = V^T V, B = V^T (m x n); solve A P = B by Gauss with partial pivoting
  std::vector<std::vector<long double>> A(static_cast<std::size_t>(m),
                                          std::vector<long double>(static_cast<std::size_t>(m), 0.0L));
  std::vector<std::vector<long double>> B(static_cast<std::size_t>(m),
                                          std::vector<long double>(static_cast<std::size_t>(n), 0.0L));
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) {
      long double acc = 0.0L;
      for (int i = 0; i < n; ++i) acc += V[std::size_t(i)][std::size_t(r)] * V[std::size_t(i)][std::size_t(c)];
      A[std::size_t(r)][std::size_t(c)] = acc;
    }
    for (int i = 0; i < n; ++i) B[std::size_t(r)][std::size_t(i)] = V[std::size_t(i)][std::size_t(r)];
  }
  for (int col = 0; col < m; ++col) {
    int piv = col;
    for (int r = col + 1; r < m; ++r) {
      if (std::abs((double)A[std::size_t(r)][std::size_t(col)]) >
          std::abs((double)A[std::size_t(piv)][std::size_t(col)])) {
        piv = r;
      }
    }
    std::swap(A[std::size_t(col)], A[std::size_t(piv)]);
    std::swap(B[std::size_t(col)], B[std::size_t(piv)]);
    const long double d = A[std::size_t(col)][std::size_t(col)];
    for (int r = 0; r < m; ++r) {
      if (r == col) continue;
      const long double f = A[std::size_t(r)][std::size_t(col)] / d;
      for (int c = col; c < m; ++c) A[std::size_t(r)][std::size_t(c)] -= f * A[std::size_t(col)][std::size_t(c)];
      for (int c = 0; c < n; ++c) B[std::size_t(r)][std::size_t(c)] -= f * B[std::size_t(col)][std::size_t(c)];
    }
  }
  std::vector<std::vector<double>> P(static_cast<std::size_t>(m),
                                     std::vector<double>(static_cast<std::size_t>(n)));
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < n; ++c) {
      P[std::size_t(r)][std::size_t(c)] =
          double(B[std::size_t(r)][std::size_t(c)] / A[std::size_t(r)][std::size_t(r)]);
    }
  }
  return P;
}

struct PolyFit {
  PolyField coef;
  double residual = 0.0;
};

PolyFit fit_polyfield(const std::vector<double>& nodes, const std::vector<SpectralField>& samples,
                      int deg) {
  const auto P = vander_projection(nodes, deg);
  const int n = static_cast<int>(nodes.size());
  const auto& like = samples.front();

  PolyFit out;
  for (int d = 0; d <= deg; ++d) {
    SpectralField c = zero_field(like);
    for (int i = 0; i < n; ++i) {
      SpectralField term = samples[static_cast<std::size_t>(i)];
      term *= P[std::size_t(d)][std::size_t(i)];
      c += term;
    }
    out.coef.push_back(std::move(c));
  }
  // residual: reconstruct every sample from the fit
  for (int i = 0; i < n; ++i) {
    SpectralField rec = zero_field(like);
    double p = 1.0;
    for (int d = 0; d <= deg; ++d) {
      SpectralField term = out.coef[static_cast<std::size_t>(d)];
      term *= p;
      rec += term;
      p *= nodes[std::size_t(i)];
    }
    rec -= samples[static_cast<std::size_t>(i)];
    out.residual = std::max(out.residual, rec.max_abs());
  }
  return out;
}

spectral::FourierSeries profile_series(const SpectralField& constant_in_s) {
  const auto profile = constant_in_s.s_mean_profile();
  return spectral::FourierSeries::from_samples(profile, kTwoPi);
}

RhoPoly to_rhopoly(const PolyField& mean_fields) {
  std::vector<spectral::FourierSeries> coef;
  coef.reserve(mean_fields.size());
  for (const auto& f : mean_fields) coef.push_back(profile_series(f));
  // trim trailing numerically-zero degrees so reported degrees stay honest
  while (!coef.empty() && coef.back().max_abs() < 1e-12) coef.pop_back();
  return RhoPoly(std::move(coef));
}

}  // namespace

// ---------------------------------------------------------------------------
// RhoPoly
// ---------------------------------------------------------------------------

double RhoPoly::eval(double rho, double psi) const {
  double acc = 0.0, p = 1.0;
  for (const auto& c : coef_) {
    acc += p * c.eval(psi);
    p *= rho;
  }
  return acc;
}

double RhoPoly::d_rho(double rho, double psi) const {
  double acc = 0.0, p = 1.0;
  for (std::size_t d = 1; d < coef_.size(); ++d) {
    acc += double(d) * p * coef_[d].eval(psi);
    p *= rho;
  }
  return acc;
}

double RhoPoly::d_psi(double rho, double psi) const {
  double acc = 0.0, p = 1.0;
  for (const auto& c : coef_) {
    acc += p * c.derivative().eval(psi);
    p *= rho;
  }
  return acc;
}

double RhoPoly::d2_rho(double rho, double psi) const {
  double acc = 0.0, p = 1.0;
  for (std::size_t d = 2; d < coef_.size(); ++d) {
    acc += double(d) * double(d - 1) * p * coef_[d].eval(psi);
    p *= rho;
  }
  return acc;
}

double RhoPoly::d_rho_psi(double rho, double psi) const {
  double acc = 0.0, p = 1.0;
  for (std::size_t d = 1; d < coef_.size(); ++d) {
    acc += double(d) * p * coef_[d].derivative().eval(psi);
    p *= rho;
  }
  return acc;
}

double RhoPoly::d2_psi(double rho, double psi) const {
  double acc = 0.0, p = 1.0;
  for (const auto& c : coef_) {
    acc += p * c.derivative().derivative().eval(psi);
    p *= rho;
  }
  return acc;
}

double RhoPoly::sup_abs() const {
  if (coef_.empty()) return 0.0;
  double out = 0.0;
  for (int ir = 0; ir <= 8; ++ir) {
    const double rho = -1.0 + 0.25 * ir;
    for (int ip = 0; ip < 256; ++ip) {
      out = std::max(out, std::abs(eval(rho, kTwoPi * ip / 256.0)));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// AveragedExpansion
// ---------------------------------------------------------------------------

void AveragedExpansion::push_transform(PolyField u, PolyField v) {
  u_.push_back(std::move(u));
  v_.push_back(std::move(v));
}

std::array<double, 2> AveragedExpansion::truncated_rhs(double rho, double psi, double t) const {
  double drho = 0.0, dpsi = 0.0;
  for (int k = 1; k <= max_order(); ++k) {
    const double scale = std::pow(t, -double(k) / (2.0 * q_));
    drho += scale * lambda(k).eval(rho, psi);
    dpsi += scale * omega(k).eval(rho, psi);
  }
  return {drho, dpsi};
}

// ---------------------------------------------------------------------------
// Lift of the slow-variable coefficients
// ---------------------------------------------------------------------------

LiftedOrder lift_FG(const OscillatorModel& model, const PhaseSchedule& sched,
                    const ResonanceData& res, int k, std::span<const double> rho_nodes,
                    GridSpec grid) {
  if (k < 1 || k > 2) {
    throw UnsupportedOrderError("generic lift builds orders 1 and 2 only");
  }
  const double a = res.a;
  const double ratio = double(res.kappa) / res.varkappa;
  const int q = model.q;

  auto f_at = [&](double r, double phi, double S) {
    double acc = 0.0;
    for (const auto& t : model.terms) {
      if (t.order == 1) acc += t.f(r, phi, S);
    }
    return acc;
  };
  auto g_at = [&](double r, double phi, double S) {
    double acc = 0.0;
    for (const auto& t : model.terms) {
      if (t.order == 1) acc += t.g(r, phi, S);
    }
    return acc;
  };

  LiftedOrder out;
  out.k = k;
  out.rho_nodes.assign(rho_nodes.begin(), rho_nodes.end());

  SpectralField base(grid.n_psi, grid.n_s, res.varkappa);

  if (k == 1) {
    SpectralField f1 = base;
    for (int i = 0; i < grid.n_psi; ++i) {
      for (int j = 0; j < grid.n_s; ++j) {
        const double S = f1.s(j);
        f1.at(i, j) = f_at(a, ratio * S + f1.psi(i), S);
      }
    }
    for (double R : rho_nodes) {
      out.F.push_back(f1);
      out.G.push_back(SpectralField(grid.n_psi, grid.n_s, res.varkappa, res.eta * R));
    }
    return out;
  }

  // k == 2
  const double h = 1e-6 * std::max(1.0, a);
  SpectralField dfr = base;  // d/dr f_1 at r = a
  SpectralField g1 = base;
  for (int i = 0; i < grid.n_psi; ++i) {
    for (int j = 0; j < grid.n_s; ++j) {
      const double S = base.s(j);
      const double phi = ratio * S + base.psi(i);
      dfr.at(i, j) = (f_at(a + h, phi, S) - f_at(a - h, phi, S)) / (2.0 * h);
      g1.at(i, j) = g_at(a, phi, S);
    }
  }
  const double om2 = model.omega(a).d2;
  const double s_term =
      ratio * sched.s_half(2) * (1.0 - 2.0 / (2.0 * q) + (2 * q == 2 ? 1.0 : 0.0));
  for (double R : rho_nodes) {
    SpectralField F = dfr;
    F *= R;
    if (q == 1) F += SpectralField(grid.n_psi, grid.n_s, res.varkappa, R / (2.0 * q));
    out.F.push_back(std::move(F));

    SpectralField G = g1;
    G += SpectralField(grid.n_psi, grid.n_s, res.varkappa, 0.5 * om2 * R * R - s_term);
    out.G.push_back(std::move(G));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Averaging engine
// ---------------------------------------------------------------------------

namespace {

AveragedExpansion compute_impl(const OscillatorModel& model, const PhaseSchedule& sched,
                               const ResonanceData& res, int order_count, GridSpec grid) {
  if (order_count < 1 || order_count > 2) {
    throw UnsupportedOrderError(
        "compute_expansion builds orders 1..2; use register_closed_form beyond");
  }
  const double eta = res.eta;
  const double s0 = sched.s(0);
  AveragedExpansion expansion(eta, model.q, res.varkappa, res.a, grid);

  const SpectralField like(grid.n_psi, grid.n_s, res.varkappa);

  // order 1: Lambda_1 = <F_1>, Omega_1 = eta rho, u_1 from the homological
  // equation, v_1 identically zero because G_1 carries no S dependence.
  const auto nodes1 = chebyshev_nodes(3);
  const LiftedOrder L1 = lift_FG(model, sched, res, 1, nodes1, grid);
  PolyFit F1 = fit_polyfield(nodes1, L1.F, 0);
  if (F1.residual > kFitTol) throw ResolutionError("order-1 lift is not constant in rho");
  if (L1.F.front().fourier_tail() > kFitTol) {
    throw ResolutionError("order-1 coefficients are unresolved on this grid");
  }

  PolyField G1{zero_field(like), SpectralField(grid.n_psi, grid.n_s, res.varkappa, eta)};
  PolyField Lam1 = pf_mean(F1.coef);
  PolyField Om1 = G1;  // <G_1> = G_1

  {
    std::vector<spectral::FourierSeries> om1_coef;
    om1_coef.push_back(profile_series(zero_field(like)));
    om1_coef.push_back(profile_series(G1[1]));
    AveragedExpansion::Order o;
    o.lambda = to_rhopoly(Lam1);
    o.omega = RhoPoly(std::move(om1_coef));
    expansion.push_order(std::move(o));
  }

  PolyField u1 = pf_solve_homological(pf_sub(Lam1, F1.coef, like), s0);
  PolyField v1 = pf_solve_homological(pf_sub(Om1, G1, like), s0);
  expansion.push_transform(u1, v1);

  if (order_count >= 2) {
    const auto nodes2 = chebyshev_nodes(4);
    const LiftedOrder L2 = lift_FG(model, sched, res, 2, nodes2, grid);
    PolyFit F2 = fit_polyfield(nodes2, L2.F, 1);
    PolyFit G2 = fit_polyfield(nodes2, L2.G, 2);
    if (F2.residual > kFitTol || G2.residual > kFitTol) {
      throw ResolutionError("order-2 lift does not fit the degree bounds");
    }

    // homological chain ledger at k = 2:
    //   tF_2 = (u_1 d_R + v_1 d_Psi) Lambda_1 - (F_1 d_R + G_1 d_Psi) u_1
    //   tG_2 = (u_1 d_R + v_1 d_Psi) Omega_1  - (F_1 d_R + G_1 d_Psi) v_1
    PolyField tF2 = pf_add(pf_mul(u1, pf_d_rho(Lam1), like), pf_mul(v1, pf_d_psi(Lam1), like), like);
    tF2 = pf_sub(tF2, pf_add(pf_mul(F1.coef, pf_d_rho(u1), like), pf_mul(G1, pf_d_psi(u1), like), like),
                 like);
    PolyField tG2 = pf_add(pf_mul(u1, pf_d_rho(Om1), like), pf_mul(v1, pf_d_psi(Om1), like), like);
    tG2 = pf_sub(tG2, pf_add(pf_mul(F1.coef, pf_d_rho(v1), like), pf_mul(G1, pf_d_psi(v1), like), like),
                 like);

    PolyField I2 = pf_sub(F2.coef, tF2, like);
    PolyField J2 = pf_sub(G2.coef, tG2, like);
    PolyField Lam2 = pf_mean(I2);
    PolyField Om2 = pf_mean(J2);

    AveragedExpansion::Order o;
    o.lambda = to_rhopoly(Lam2);
    o.omega = to_rhopoly(Om2);
    if (o.lambda.degree() > 1 || o.omega.degree() > 2) {
      throw ResolutionError("order-2 averages exceed their degree bounds");
    }
    expansion.push_order(std::move(o));

    PolyField u2 = pf_solve_homological(pf_sub(Lam2, I2, like), s0);
    PolyField v2 = pf_solve_homological(pf_sub(Om2, J2, like), s0);
    expansion.push_transform(u2, v2);
  }

  return expansion;
}

}  // namespace

AveragedExpansion compute_expansion(const OscillatorModel& model, const PhaseSchedule& sched,
                                    const ResonanceData& res, int order_count, GridSpec grid) {
  try {
    return compute_impl(model, sched, res, order_count, grid);
  } catch (const ResolutionError&) {
    GridSpec doubled{grid.n_psi * 2, grid.n_s * 2};
    return compute_impl(model, sched, res, order_count, doubled);
  }
}

void register_closed_form(AveragedExpansion& exp, int k, const CoefficientFn& lambda_k,
                          const CoefficientFn& omega_k) {
  if (k < 1) throw ValidationError("closed-form order must be >= 1");
  const int n_psi = exp.grid().n_psi;
  const auto nodes = chebyshev_nodes(k + 2);
  const int n = static_cast<int>(nodes.size());

  auto fit_one = [&](const CoefficientFn& fn, int deg) {
    const auto P = vander_projection(nodes, deg);
    std::vector<std::vector<double>> samples(
        static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n_psi)));
    for (int i = 0; i < n; ++i) {
      for (int p = 0; p < n_psi; ++p) {
        samples[std::size_t(i)][std::size_t(p)] = fn(nodes[std::size_t(i)], kTwoPi * p / n_psi);
      }
    }
    std::vector<std::vector<double>> prof(static_cast<std::size_t>(deg + 1),
                                          std::vector<double>(static_cast<std::size_t>(n_psi), 0.0));
    for (int d = 0; d <= deg; ++d) {
      for (int i = 0; i < n; ++i) {
        for (int p = 0; p < n_psi; ++p) {
          prof[std::size_t(d)][std::size_t(p)] +=
              P[std::size_t(d)][std::size_t(i)] * samples[std::size_t(i)][std::size_t(p)];
        }
      }
    }
    double residual = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int p = 0; p < n_psi; ++p) {
        double rec = 0.0, pw = 1.0;
        for (int d = 0; d <= deg; ++d) {
          rec += pw * prof[std::size_t(d)][std::size_t(p)];
          pw *= nodes[std::size_t(i)];
        }
        residual = std::max(residual, std::abs(rec - samples[std::size_t(i)][std::size_t(p)]));
      }
    }
    std::vector<spectral::FourierSeries> coef;
    for (int d = 0; d <= deg; ++d) {
      coef.push_back(spectral::FourierSeries::from_samples(prof[std::size_t(d)], kTwoPi));
    }
    while (!coef.empty() && coef.back().max_abs() < 1e-12) coef.pop_back();
    return std::pair<RhoPoly, double>(RhoPoly(std::move(coef)), residual);
  };

  auto [lam, lam_res] = fit_one(lambda_k, k - 1);
  auto [om, om_res] = fit_one(omega_k, k);
  if (lam_res > kFitTol || om_res > kFitTol) {
    throw ValidationError("closed form violates the degree bounds of its order");
  }

  while (exp.max_order() < k - 1) {
    AveragedExpansion::Order pad;
    pad.provenance = OrderProvenance::ClosedForm;
    exp.push_order(std::move(pad));
  }
  AveragedExpansion::Order o;
  o.lambda = std::move(lam);
  o.omega = std::move(om);
  o.provenance = OrderProvenance::ClosedForm;
  if (exp.max_order() >= k) {
    exp.set_order(k, std::move(o));
  } else {
    exp.push_order(std::move(o));
  }
}

std::vector<ClosedFormOrder> builtin_higher_orders(const OscillatorModel& model,
                                                   const PhaseSchedule& sched,
                                                   const ResonanceData& res) {
  if (model.label != "ex2") return {};
  const double a = res.a;
  const double th = model.params.count("theta") ? model.params.at("theta") : 0.25;
  const double a0 = model.params.count("alpha0") ? model.params.at("alpha0") : 0.0;
  const double a1 = model.params.count("alpha1") ? model.params.at("alpha1") : 0.0;
  const double b0 = model.params.count("beta0") ? model.params.at("beta0") : 0.0;
  const double b1 = model.params.count("beta1") ? model.params.at("beta1") : 0.0;
  const double s2 = sched.q() >= 2 ? sched.s(2) : 0.0;
  const double a2 = a * a, a4 = a2 * a2, a6 = a4 * a2, a8 = a4 * a4;

  std::vector<ClosedFormOrder> out;
  out.push_back(
      {3,
       [=](double rho, double psi) {
         return a / 32.0 *
                (16.0 * b0 - a1 * (12.0 * a4 * a0 + 12.0 * rho * rho + 5.0 * a6 * a0 * th) *
                                 std::cos(2.0 * psi) +
                 8.0 * b1 * std::sin(2.0 * psi) + 3.0 * a4 * a1 * a1 * std::sin(4.0 * psi));
       },
       [=](double rho, double psi) {
         return a * rho / 4.0 * (-3.0 * a0 + 2.0 * a1 * std::sin(2.0 * psi));
       }});
  out.push_back(
      {4,
       [=](double rho, double psi) {
         return -rho / 64.0 *
                (a1 *
                     (111.0 * a4 * a0 + 8.0 * rho * rho + 336.0 * a6 * a0 * th +
                      432.0 * a8 * a0 * th * th) *
                     std::cos(2.0 * psi) -
                 2.0 * (8.0 + 16.0 * b0 + 8.0 * b1 * std::sin(2.0 * psi) +
                        3.0 * a4 * a1 * a1 * (5.0 + 16.0 * a2 * th) * std::sin(4.0 * psi)));
       },
       [=](double rho, double psi) {
         return (-54.0 * (a4 * (57.0 * a0 * a0 + 8.0 * a1 * a1) + 24.0 * a0 * rho * rho +
                          32.0 * s2) -
                 3.0 * a6 * (3537.0 * a0 * a0 + 437.0 * a1 * a1) * th -
                 16.0 * a8 * (918.0 * a0 * a0 + 139.0 * a1 * a1) * th * th +
                 864.0 * b1 * std::cos(2.0 * psi) +
                 54.0 * a1 *
                     (3.0 * a4 * a1 * (3.0 + 8.0 * a2 * th) * std::cos(4.0 * psi) +
                      (16.0 * rho * rho + a4 * a0 * (67.0 + a2 * th * (173.0 + 216.0 * a2 * th))) *
                          std::sin(2.0 * psi))) /
                3456.0;
       }});
  return out;
}

}  // namespace resonate
