#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "resonate/resonance.hpp"
#include "resonate/schedule.hpp"
#include "resonate/spectral.hpp"
#include "resonate/system.hpp"

namespace resonate {

// Real field on a uniform periodic grid over [0, 2pi) x [0, 2pi varkappa),
// row-major in psi. Grid sizes are powers of two.
class SpectralField {
 public:
  SpectralField() = default;
  SpectralField(int n_psi, int n_s, int varkappa, double fill = 0.0);

  int n_psi() const { return n_psi_; }
  int n_s() const { return n_s_; }
  int varkappa() const { return varkappa_; }
  double psi(int i) const;
  double s(int j) const;
  double& at(int i, int j) { return data_[std::size_t(i) * n_s_ + j]; }
  double at(int i, int j) const { return data_[std::size_t(i) * n_s_ + j]; }

  std::vector<double> s_mean_profile() const;
  SpectralField psi_derivative() const;
  SpectralField s_derivative() const;
  double max_abs() const;
  // Largest Fourier coefficient past N/3 on either axis (resolution check).
  double fourier_tail() const;

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double c);
  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(SpectralField a, double c) { return a *= c; }
  // pointwise product
  friend SpectralField hadamard(SpectralField a, const SpectralField& b);

 private:
  int n_psi_ = 0, n_s_ = 0, varkappa_ = 1;
  std::vector<double> data_;
};

// Mean over the S axis (trapezoid on the periodic grid, spectrally exact).
std::vector<double> average_over_S(const SpectralField& field);

// Unique zero-S-mean solution u of s0 d_S u = rhs, solved in Fourier space
// (wavenumbers m/varkappa). The rhs must have S-mean < 1e-8 at every psi.
SpectralField solve_homological(const SpectralField& rhs, double s0);

// Polynomial in rho with grid-field coefficients; index = rho degree.
using PolyField = std::vector<SpectralField>;

struct GridSpec {
  int n_psi = 256;
  int n_s = 256;
};

// F_k, G_k of the lifted system sampled at the given rho nodes.
struct LiftedOrder {
  int k = 1;
  std::vector<double> rho_nodes;
  std::vector<SpectralField> F;
  std::vector<SpectralField> G;
};

// Chebyshev nodes on [-1, 1].
std::vector<double> chebyshev_nodes(int count);

LiftedOrder lift_FG(const OscillatorModel& model, const PhaseSchedule& sched,
                    const ResonanceData& res, int k, std::span<const double> rho_nodes,
                    GridSpec grid = {});

// Lambda_k / Omega_k: polynomial in rho whose coefficients are 1-D Fourier
// data in psi (period 2pi).
class RhoPoly {
 public:
  RhoPoly() = default;
  explicit RhoPoly(std::vector<spectral::FourierSeries> coef) : coef_(std::move(coef)) {}

  int degree() const { return static_cast<int>(coef_.size()) - 1; }
  double eval(double rho, double psi) const;
  double d_rho(double rho, double psi) const;
  double d_psi(double rho, double psi) const;
  double d2_rho(double rho, double psi) const;
  double d_rho_psi(double rho, double psi) const;
  double d2_psi(double rho, double psi) const;
  // sup |.| over rho in [-1,1] x psi in [0,2pi) on a sampling box
  double sup_abs() const;
  const spectral::FourierSeries& coefficient(int d) const {
    return coef_[static_cast<std::size_t>(d)];
  }
  bool is_zero(double tol) const { return coef_.empty() || sup_abs() <= tol; }

 private:
  std::vector<spectral::FourierSeries> coef_;
};

enum class OrderProvenance { Generic, ClosedForm };

class AveragedExpansion {
 public:
  int max_order() const { return static_cast<int>(orders_.size()); }
  const RhoPoly& lambda(int k) const { return orders_[std::size_t(k - 1)].lambda; }
  const RhoPoly& omega(int k) const { return orders_[std::size_t(k - 1)].omega; }
  OrderProvenance provenance(int k) const { return orders_[std::size_t(k - 1)].provenance; }

  double eta() const { return eta_; }
  int q() const { return q_; }
  int varkappa() const { return varkappa_; }
  double a() const { return a_; }
  GridSpec grid() const { return grid_; }

  // Right-hand side of the truncated system: sum_k t^{-k/2q} (Lambda_k, Omega_k).
  std::array<double, 2> truncated_rhs(double rho, double psi, double t) const;

  // Homological solutions, retained for diagnostics; v_1 is identically zero.
  const PolyField& u(int k) const { return u_[std::size_t(k - 1)]; }
  const PolyField& v(int k) const { return v_[std::size_t(k - 1)]; }
  int transform_orders() const { return static_cast<int>(u_.size()); }

  struct Order {
    RhoPoly lambda;
    RhoPoly omega;
    OrderProvenance provenance = OrderProvenance::Generic;
  };

  // construction surface (compute_expansion / register_closed_form / tests)
  AveragedExpansion(double eta, int q, int varkappa, double a, GridSpec grid)
      : eta_(eta), q_(q), varkappa_(varkappa), a_(a), grid_(grid) {}
  void push_order(Order o) { orders_.push_back(std::move(o)); }
  void set_order(int k, Order o) { orders_[std::size_t(k - 1)] = std::move(o); }
  void push_transform(PolyField u, PolyField v);

 private:
  double eta_ = 0.0;
  int q_ = 2;
  int varkappa_ = 1;
  double a_ = 0.0;
  GridSpec grid_;
  std::vector<Order> orders_;
  std::vector<PolyField> u_, v_;
};

// Averaged expansion to order N (N <= 2 for the generic engine; deeper orders
// come from register_closed_form). Retries once at doubled resolution if a
// polynomial fit fails.
AveragedExpansion compute_expansion(const OscillatorModel& model, const PhaseSchedule& sched,
                                    const ResonanceData& res, int order_count,
                                    GridSpec grid = {});

using CoefficientFn = std::function<double(double rho, double psi)>;

// Install user-supplied closed forms for order k (sampled onto the
// polynomial/Fourier representation; degree bounds deg Lambda_k <= k-1,
// deg Omega_k <= k are enforced).
void register_closed_form(AveragedExpansion& exp, int k, const CoefficientFn& lambda_k,
                          const CoefficientFn& omega_k);

struct ClosedFormOrder {
  int k;
  CoefficientFn lambda;
  CoefficientFn omega;
};

// Higher-order averaged coefficients shipped with the builtins (ex2 carries
// closed forms for orders 3 and 4); empty for models without them.
std::vector<ClosedFormOrder> builtin_higher_orders(const OscillatorModel& model,
                                                   const PhaseSchedule& sched,
                                                   const ResonanceData& res);

}  // namespace resonate
