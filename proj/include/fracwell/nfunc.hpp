#pragma once

// N-functions G(t) = int_0^t g and their calculus: exponent bounds, inverses,
// the complementary function, the Sobolev conjugate, Luxemburg norms and the
// standard Orlicz inequalities expressed as checkable predicates.

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fracwell/errors.hpp"

namespace fracwell {

enum class NKind { Power, PowerSum, PowerLog, Custom };

struct ExponentBounds {
  double q_minus;
  double q_plus;
};

class NFunction {
 public:
  // G(t) = t^q.
  static NFunction power(double q);
  // G(t) = t^q1 + t^q2 (q1 <= q2 after sorting).
  static NFunction power_sum(double q1, double q2);
  // G(t) = t^q (|log t| + 1).
  static NFunction power_log(double q);
  // g piecewise linear through the origin and the knots (t_k, g_k), extended
  // linearly past the last knot. G is its exact integral.
  static NFunction custom(std::vector<double> t, std::vector<double> g);

  NKind kind() const noexcept { return kind_; }
  std::string name() const;
  double param1() const noexcept { return a_; }
  double param2() const noexcept { return b_; }

  double G(double t) const;
  double g(double t) const;
  // g(t)/t, with the value at t = 0 taken as g'(0) when finite and 0 otherwise.
  double g_over_t(double t) const;
  double G_inverse(double y) const;
  // Right-continuous generalized inverse sup{t : g(t) <= y}.
  double g_inverse(double y) const;
  // Complementary function sup_t (s t - G(t)).
  double G_tilde(double s) const;

  ExponentBounds bounds() const noexcept { return bounds_; }
  bool normalized() const;

  // Exact for Power and PowerSum; log-grid scan over [1e-6, 1e6] otherwise.
  static ExponentBounds scan_bounds(const NFunction& G, int points = 10000, double t_lo = 1e-6,
                                    double t_hi = 1e6);

 private:
  struct Tables;
  NFunction() = default;
  void finish();
  double invert(double y, bool use_g) const;

  NKind kind_ = NKind::Power;
  double a_ = 2.0;
  double b_ = 0.0;
  std::shared_ptr<const Tables> tables_;
  ExponentBounds bounds_{2.0, 2.0};
};

struct NFunctionAudit {
  bool valid = true;
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
};

// Sampled checks: g(0)=0, g>0, g nondecreasing, the t g/G bounds, the t g'/g
// bounds by finite differences and the doubling bound G(2t) <= 2^{q+} G(t).
NFunctionAudit audit(const NFunction& G);

// Convexity of t -> G(sqrt t) by second differences on a log grid.
bool sqrt_convexity_check(const NFunction& G);

// Effective power of G^{-1} near 0, i.e. the slope of log G^{-1}(w) against log w.
double inverse_slope_at_zero(const NFunction& G);

// True when int_0 G^{-1}(w) / w^{(N+s)/N} dw converges at the lower limit.
bool sobolev_integrable(const NFunction& G, double s, int N = 1);

// (G*)^{-1}(t) = int_0^t G^{-1}(w) / w^{(N+s)/N} dw. Throws HypothesisViolation when
// the integrand is not integrable at 0.
double sobolev_conjugate_inv(const NFunction& G, double t, double s, int N = 1);

// G* itself, obtained by numerically inverting sobolev_conjugate_inv.
std::function<double(double)> sobolev_conjugate(const NFunction& G, double s, int N = 1);

// Direct maximization of s t - G(t) over t, independent of g^{-1}.
double conjugate_by_sup(const NFunction& G, double s);

double zeta_minus(double t, const ExponentBounds& b);
double zeta_plus(double t, const ExponentBounds& b);

// Luxemburg norm inf{lambda > 0 : modular(lambda) <= 1} for a nonincreasing modular.
// `modular(lambda)` returns {value, d value / d lambda}; a NaN slope falls back to
// bisection. `guess` seeds the bracket, which is widened geometrically.
struct ModularValue {
  double value;
  double slope;
};

template <class Modular>
double luxemburg_solve(Modular&& modular, double guess) {
  if (!(guess > 0.0) || !std::isfinite(guess)) throw DomainError("luxemburg_solve: bad initial guess");
  double lo = guess * 1e-3;
  double hi = guess * 1e3;
  for (int k = 0; modular(lo).value <= 1.0; ++k) {
    if (k > 60) throw DomainError("luxemburg_solve: modular does not exceed 1 near 0");
    lo *= 1e-3;
  }
  for (int k = 0; modular(hi).value > 1.0; ++k) {
    if (k > 60) throw DomainError("luxemburg_solve: modular does not drop below 1");
    hi *= 1e3;
  }
  double c = std::sqrt(lo * hi);
  for (int it = 0; it < 400; ++it) {
    ModularValue m = modular(c);
    if (!std::isfinite(m.value)) throw DomainError("luxemburg_solve: non-finite modular");
    if (m.value > 1.0) lo = c; else hi = c;
    if (std::abs(m.value - 1.0) <= 4.0 * std::numeric_limits<double>::epsilon()) return c;
    if (hi - lo <= 1e-13 * hi) return hi;
    double next = std::sqrt(lo * hi);
    if (std::isfinite(m.slope) && m.slope < 0.0) {
      double newton = c - (m.value - 1.0) / m.slope;
      if (newton > lo && newton < hi) next = newton;
    }
    if (next == c) return c;
    c = next;
  }
  return c;
}

// Luxemburg norm of a weighted sample set (|v_i|, w_i) under an arbitrary Young
// function `phi`; bisection only. Returns 0 for the zero sample.
double luxemburg_norm(std::span<const double> values, std::span<const double> weights,
                      const std::function<double(double)>& phi);
double luxemburg_norm(std::span<const double> values, std::span<const double> weights,
                      const NFunction& G);
double luxemburg_norm_conjugate(std::span<const double> values, std::span<const double> weights,
                                const NFunction& G);

// min{a^{q-}, a^{q+}} G(b) <= G(ab) <= max{..} G(b) and the same for g with exponents q -+ 1.
bool power_comparison_check(const NFunction& G, double a, double b);
// zeta-(norm) <= modular <= zeta+(norm).
bool zeta_sandwich_check(double modular, double norm, const NFunction& G);
// a t <= G(t) + G~(a).
bool young_check(const NFunction& G, double a, double t);
// G~(g(t)) <= (q+ - 1) G(t).
bool conjugate_bound_check(const NFunction& G, double t);
// sum w M F <= 2 |M|_G |F|_G~.
bool holder_orlicz_check(std::span<const double> m_samples, std::span<const double> f_samples,
                         std::span<const double> weights, const NFunction& G);
// Whether A(k t)/B(t) trends to 0 along a geometric grid up to 1e8.
bool ess_stronger_check(const std::function<double(double)>& A, const std::function<double(double)>& B,
                        double k);

}  // namespace fracwell
