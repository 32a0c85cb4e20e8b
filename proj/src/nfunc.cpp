#include "fracwell/nfunc.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <cstdint>
#include <sstream>

namespace fracwell {

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error([&] {
        std::string msg = "invalid configuration:";
        for (const auto& p : problems) msg += "\n  " + p;
        return msg;
      }()),
      problems_(std::move(problems)) {}

namespace {

constexpr double kRelTol = 1e-12;

bool leq(double lhs, double rhs) {
  return lhs <= rhs + kRelTol * (std::abs(lhs) + std::abs(rhs)) + 1e-300;
}

void require_nonnegative(double t, const char* what) {
  if (!(t >= 0.0) || std::isnan(t)) throw DomainError(std::string(what) + ": argument must be >= 0");
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  const double l0 = std::log(lo);
  const double l1 = std::log(hi);
  for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = std::exp(l0 + (l1 - l0) * k / (n - 1));
  return out;
}

}  // namespace

struct NFunction::Tables {
  // Custom kind: knots including the origin, and the exact integral at each knot.
  std::vector<double> knot_t;
  std::vector<double> knot_g;
  std::vector<double> knot_G;
  // Guide tables for the numerical inverses (running maxima, so monotone).
  std::vector<double> guide_t;
  std::vector<double> guide_G;
  std::vector<double> guide_g;
};

NFunction NFunction::power(double q) {
  if (!(q > 1.0)) throw DomainError("power N-function needs q > 1");
  NFunction f;
  f.kind_ = NKind::Power;
  f.a_ = q;
  f.finish();
  return f;
}

NFunction NFunction::power_sum(double q1, double q2) {
  if (!(q1 > 1.0) || !(q2 > 1.0)) throw DomainError("power_sum N-function needs q1, q2 > 1");
  NFunction f;
  f.kind_ = NKind::PowerSum;
  f.a_ = std::min(q1, q2);
  f.b_ = std::max(q1, q2);
  f.finish();
  return f;
}

NFunction NFunction::power_log(double q) {
  if (!(q > 1.0)) throw DomainError("power_log N-function needs q > 1");
  NFunction f;
  f.kind_ = NKind::PowerLog;
  f.a_ = q;
  f.finish();
  return f;
}

NFunction NFunction::custom(std::vector<double> t, std::vector<double> g) {
  if (t.empty() || t.size() != g.size()) throw DomainError("custom N-function needs matching non-empty knots");
  auto tables = std::make_shared<Tables>();
  tables->knot_t.push_back(0.0);
  tables->knot_g.push_back(0.0);
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (!(t[k] > tables->knot_t.back()) || !std::isfinite(t[k]) || !std::isfinite(g[k]))
      throw DomainError("custom N-function knots must be finite with strictly increasing t > 0");
    tables->knot_t.push_back(t[k]);
    tables->knot_g.push_back(g[k]);
  }
  tables->knot_G.assign(tables->knot_t.size(), 0.0);
  for (std::size_t k = 1; k < tables->knot_t.size(); ++k) {
    const double dt = tables->knot_t[k] - tables->knot_t[k - 1];
    tables->knot_G[k] = tables->knot_G[k - 1] + 0.5 * dt * (tables->knot_g[k] + tables->knot_g[k - 1]);
  }
  NFunction f;
  f.kind_ = NKind::Custom;
  f.tables_ = tables;
  f.finish();
  return f;
}

void NFunction::finish() {
  if (kind_ != NKind::Power) {
    auto tables = tables_ ? std::make_shared<Tables>(*tables_) : std::make_shared<Tables>();
    tables_ = tables;  // G and g below only read the knot part
    tables->guide_t = log_grid(1e-8, 1e8, 1601);
    tables->guide_G.resize(tables->guide_t.size());
    tables->guide_g.resize(tables->guide_t.size());
    double run_G = 0.0;
    double run_g = 0.0;
    for (std::size_t k = 0; k < tables->guide_t.size(); ++k) {
      run_G = std::max(run_G, G(tables->guide_t[k]));
      run_g = std::max(run_g, g(tables->guide_t[k]));
      tables->guide_G[k] = run_G;
      tables->guide_g[k] = run_g;
    }
  }
  switch (kind_) {
    case NKind::Power: bounds_ = {a_, a_}; break;
    case NKind::PowerSum: bounds_ = {a_, b_}; break;
    default: bounds_ = scan_bounds(*this); break;
  }
  if (bounds_.q_minus < 1.0) throw DomainError("not an N-function: t g(t)/G(t) drops below 1");
}

std::string NFunction::name() const {
  std::ostringstream os;
  switch (kind_) {
    case NKind::Power: os << "power(" << a_ << ")"; break;
    case NKind::PowerSum: os << "power_sum(" << a_ << "," << b_ << ")"; break;
    case NKind::PowerLog: os << "power_log(" << a_ << ")"; break;
    case NKind::Custom: os << "custom(" << tables_->knot_t.size() - 1 << " knots)"; break;
  }
  return os.str();
}

double NFunction::G(double t) const {
  require_nonnegative(t, "G");
  if (t == 0.0) return 0.0;
  switch (kind_) {
    case NKind::Power: return std::pow(t, a_);
    case NKind::PowerSum: return std::pow(t, a_) + std::pow(t, b_);
    case NKind::PowerLog: return std::pow(t, a_) * (std::abs(std::log(t)) + 1.0);
    case NKind::Custom: {
      const auto& kt = tables_->knot_t;
      const auto& kg = tables_->knot_g;
      std::size_t k = static_cast<std::size_t>(std::upper_bound(kt.begin(), kt.end(), t) - kt.begin()) - 1;
      const std::size_t seg = std::min(k, kt.size() - 2);
      const double slope = (kg[seg + 1] - kg[seg]) / (kt[seg + 1] - kt[seg]);
      const double dt = t - kt[k];
      return tables_->knot_G[k] + kg[k] * dt + 0.5 * slope * dt * dt;
    }
  }
  return 0.0;
}

double NFunction::g(double t) const {
  require_nonnegative(t, "g");
  if (t == 0.0) return 0.0;
  switch (kind_) {
    case NKind::Power: return a_ * std::pow(t, a_ - 1.0);
    case NKind::PowerSum: return a_ * std::pow(t, a_ - 1.0) + b_ * std::pow(t, b_ - 1.0);
    case NKind::PowerLog: {
      const double lt = std::log(t);
      const double tq1 = std::pow(t, a_ - 1.0);
      return t < 1.0 ? tq1 * (a_ * (1.0 - lt) - 1.0) : tq1 * (a_ * (1.0 + lt) + 1.0);
    }
    case NKind::Custom: {
      const auto& kt = tables_->knot_t;
      const auto& kg = tables_->knot_g;
      std::size_t k = static_cast<std::size_t>(std::upper_bound(kt.begin(), kt.end(), t) - kt.begin()) - 1;
      const std::size_t seg = std::min(k, kt.size() - 2);
      const double slope = (kg[seg + 1] - kg[seg]) / (kt[seg + 1] - kt[seg]);
      return kg[seg] + slope * (t - kt[seg]);
    }
  }
  return 0.0;
}

double NFunction::g_over_t(double t) const {
  if (t > 0.0) return g(t) / t;
  switch (kind_) {
    case NKind::Power: return a_ == 2.0 ? 2.0 : 0.0;
    case NKind::PowerSum: return (a_ == 2.0 ? 2.0 : 0.0) + (b_ == 2.0 ? 2.0 : 0.0);
    case NKind::PowerLog: return 0.0;
    case NKind::Custom: return tables_->knot_g[1] / tables_->knot_t[1];
  }
  return 0.0;
}

double NFunction::invert(double y, bool use_g) const {
  const auto& gt = tables_->guide_t;
  const auto& gv = use_g ? tables_->guide_g : tables_->guide_G;
  auto f = [&](double t) { return (use_g ? g(t) : G(t)) - y; };
  const std::size_t j = static_cast<std::size_t>(std::upper_bound(gv.begin(), gv.end(), y) - gv.begin());
  double lo = j == 0 ? 0.0 : gt[j - 1];
  double hi;
  if (j < gt.size()) {
    hi = gt[j];
  } else {
    lo = gt.back();
    hi = lo * 2.0;
    while (f(hi) <= 0.0) {
      lo = hi;
      hi *= 2.0;
      if (!std::isfinite(hi)) throw DomainError("N-function inverse: argument too large");
    }
  }
  const double flo = f(lo);
  const double fhi = f(hi);
  if (flo <= 0.0 && fhi > 0.0) {
    std::uintmax_t iters = 200;
    auto tol = boost::math::tools::eps_tolerance<double>(std::numeric_limits<double>::digits - 1);
    auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
    return 0.5 * (r.first + r.second);
  }
  for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0) hi = mid; else lo = mid;
  }
  return 0.5 * (lo + hi);
}

double NFunction::G_inverse(double y) const {
  require_nonnegative(y, "G_inverse");
  if (y == 0.0) return 0.0;
  if (kind_ == NKind::Power) return std::pow(y, 1.0 / a_);
  return invert(y, false);
}

double NFunction::g_inverse(double y) const {
  require_nonnegative(y, "g_inverse");
  if (y == 0.0) return 0.0;
  if (kind_ == NKind::Power) return std::pow(y / a_, 1.0 / (a_ - 1.0));
  return invert(y, true);
}

double NFunction::G_tilde(double s) const {
  require_nonnegative(s, "G_tilde");
  if (s == 0.0) return 0.0;
  if (kind_ == NKind::Power) return (a_ - 1.0) * std::pow(s / a_, a_ / (a_ - 1.0));
  const double t0 = g_inverse(s);
  return s * t0 - G(t0);
}

bool NFunction::normalized() const { return std::abs(G(1.0) - 1.0) <= 1e-12; }

ExponentBounds NFunction::scan_bounds(const NFunction& G, int points, double t_lo, double t_hi) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double t : log_grid(t_lo, t_hi, points)) {
    const double r = t * G.g(t) / G.G(t);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return {lo, hi};
}

NFunctionAudit audit(const NFunction& G) {
  NFunctionAudit out;
  auto fail = [&](const std::string& m) {
    out.valid = false;
    out.errors.push_back(m);
  };
  if (G.g(0.0) != 0.0) fail("g(0) != 0");
  const auto b = G.bounds();
  const auto grid = log_grid(1e-6, 1e6, 10000);
  double prev_g = 0.0;
  bool ratio_ok = true, monotone = true, positive = true, doubling = true, fd_ok = true;
  double fd_worst_t = 0.0;
  for (std::size_t k = 0; k < grid.size(); k += 5) {
    const double t = grid[k];
    const double gt = G.g(t);
    const double Gt = G.G(t);
    if (!(gt > 0.0)) positive = false;
    if (gt < prev_g * (1.0 - 1e-12)) monotone = false;
    prev_g = gt;
    const double r = t * gt / Gt;
    if (!leq(b.q_minus, r) || !leq(r, b.q_plus)) ratio_ok = false;
    if (!leq(G.G(2.0 * t), std::pow(2.0, b.q_plus) * Gt)) doubling = false;
    const double dt = 1e-5 * t;
    const double left = (gt - G.g(t - dt)) / dt;
    const double right = (G.g(t + dt) - gt) / dt;
    const double central = 0.5 * (left + right);
    if (std::abs(left - right) > 1e-3 * std::abs(central) + 1e-12) continue;  // kink: g' does not exist
    const double e = t * central / gt;
    if (e < b.q_minus - 1.0 - 1e-4 || e > b.q_plus - 1.0 + 1e-4) {
      if (fd_ok) fd_worst_t = t;
      fd_ok = false;
    }
  }
  if (!positive) fail("g(t) is not positive for t > 0");
  if (!monotone) fail("g is not nondecreasing");
  if (!ratio_ok) fail("t g(t)/G(t) leaves [q-, q+]");
  if (!doubling) fail("doubling bound G(2t) <= 2^{q+} G(t) fails");
  if (!fd_ok) {
    std::ostringstream os;
    os << "t g'(t)/g(t) leaves [q- - 1, q+ - 1] (first at t=" << fd_worst_t << ")";
    out.warnings.push_back(os.str());
  }
  return out;
}

bool sqrt_convexity_check(const NFunction& G) {
  const auto grid = log_grid(1e-6, 1e6, 2000);
  for (std::size_t k = 1; k + 1 < grid.size(); ++k) {
    const double x0 = grid[k - 1], x1 = grid[k], x2 = grid[k + 1];
    const double f0 = G.G(std::sqrt(x0)), f1 = G.G(std::sqrt(x1)), f2 = G.G(std::sqrt(x2));
    // Chord above the graph at the middle node.
    const double chord = f0 + (f2 - f0) * (x1 - x0) / (x2 - x0);
    if (f1 > chord + 1e-9 * std::abs(chord)) return false;
  }
  return true;
}

double inverse_slope_at_zero(const NFunction& G) {
  const double w1 = 1e-30, w2 = 1e-28;
  return std::log(G.G_inverse(w2) / G.G_inverse(w1)) / std::log(w2 / w1);
}

bool sobolev_integrable(const NFunction& G, double s, int N) {
  return inverse_slope_at_zero(G) - s / N > 1e-6;
}

double sobolev_conjugate_inv(const NFunction& G, double t, double s, int N) {
  require_nonnegative(t, "sobolev_conjugate_inv");
  if (!sobolev_integrable(G, s, N))
    throw HypothesisViolation("G^{-1}(w)/w^{(N+s)/N} is not integrable at 0");
  if (t == 0.0) return 0.0;
  const double sigma = s / N;
  // w = t e^{-y} maps (0, t] to [0, inf) and removes the endpoint singularity.
  auto f = [&](double y) {
    const double w = t * std::exp(-y);
    if (w < 1e-300) return 0.0;
    return G.G_inverse(w) * std::pow(w, -sigma);
  };
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity(), 1e-12);
}

std::function<double(double)> sobolev_conjugate(const NFunction& G, double s, int N) {
  if (!sobolev_integrable(G, s, N))
    throw HypothesisViolation("G^{-1}(w)/w^{(N+s)/N} is not integrable at 0");
  return [G, s, N](double y) {
    require_nonnegative(y, "sobolev_conjugate");
    if (y == 0.0) return 0.0;
    auto f = [&](double x) { return sobolev_conjugate_inv(G, x, s, N) - y; };
    double lo = 1.0, hi = 1.0;
    if (f(1.0) < 0.0) {
      while (f(hi) < 0.0) {
        lo = hi;
        hi *= 16.0;
        if (!std::isfinite(hi)) throw DomainError("sobolev_conjugate: argument too large");
      }
    } else {
      while (f(lo) > 0.0) {
        hi = lo;
        lo /= 16.0;
      }
    }
    std::uintmax_t iters = 200;
    auto tol = boost::math::tools::eps_tolerance<double>(std::numeric_limits<double>::digits - 4);
    auto r = boost::math::tools::toms748_solve(f, lo, hi, tol, iters);
    return 0.5 * (r.first + r.second);
  };
}

double conjugate_by_sup(const NFunction& G, double s) {
  require_nonnegative(s, "conjugate_by_sup");
  if (s == 0.0) return 0.0;
  double hi = 1.0;
  while (G.g(hi) <= s) hi *= 2.0;
  auto neg = [&](double t) { return G.G(t) - s * t; };
  auto r = boost::math::tools::brent_find_minima(neg, 0.0, hi, std::numeric_limits<double>::digits / 2);
  return -r.second;
}

double zeta_minus(double t, const ExponentBounds& b) {
  return std::min(std::pow(t, b.q_minus), std::pow(t, b.q_plus));
}

double zeta_plus(double t, const ExponentBounds& b) {
  return std::max(std::pow(t, b.q_minus), std::pow(t, b.q_plus));
}

namespace {

void check_samples(std::span<const double> values, std::span<const double> weights) {
  if (values.size() != weights.size()) throw ContractError("luxemburg_norm: size mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || !std::isfinite(weights[i])) throw DomainError("luxemburg_norm: non-finite sample");
    if (weights[i] < 0.0) throw DomainError("luxemburg_norm: negative weight");
  }
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

double luxemburg_norm(std::span<const double> values, std::span<const double> weights,
                      const std::function<double(double)>& phi) {
  check_samples(values, weights);
  const double vmax = max_abs(values);
  if (vmax == 0.0) return 0.0;
  auto modular = [&](double lambda) {
    double acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) acc += weights[i] * phi(std::abs(values[i]) / lambda);
    return ModularValue{acc, std::numeric_limits<double>::quiet_NaN()};
  };
  return luxemburg_solve(modular, vmax);
}

double luxemburg_norm(std::span<const double> values, std::span<const double> weights, const NFunction& G) {
  check_samples(values, weights);
  const double vmax = max_abs(values);
  if (vmax == 0.0) return 0.0;
  double mass = 0.0;
  for (double w : weights) mass += w;
  auto modular = [&](double lambda) {
    double acc = 0.0, slope = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double x = std::abs(values[i]) / lambda;
      acc += weights[i] * G.G(x);
      slope -= weights[i] * G.g(x) * x / lambda;
    }
    return ModularValue{acc, slope};
  };
  return luxemburg_solve(modular, vmax / G.G_inverse(1.0 / mass));
}

double luxemburg_norm_conjugate(std::span<const double> values, std::span<const double> weights,
                                const NFunction& G) {
  check_samples(values, weights);
  const double vmax = max_abs(values);
  if (vmax == 0.0) return 0.0;
  auto modular = [&](double lambda) {
    double acc = 0.0, slope = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double x = std::abs(values[i]) / lambda;
      acc += weights[i] * G.G_tilde(x);
      slope -= weights[i] * G.g_inverse(x) * x / lambda;
    }
    return ModularValue{acc, slope};
  };
  return luxemburg_solve(modular, vmax);
}

bool power_comparison_check(const NFunction& G, double a, double b) {
  const auto bd = G.bounds();
  const double lo = std::min(std::pow(a, bd.q_minus), std::pow(a, bd.q_plus));
  const double hi = std::max(std::pow(a, bd.q_minus), std::pow(a, bd.q_plus));
  const double Gab = G.G(a * b), Gb = G.G(b);
  const double glo = std::min(std::pow(a, bd.q_minus - 1.0), std::pow(a, bd.q_plus - 1.0));
  const double ghi = std::max(std::pow(a, bd.q_minus - 1.0), std::pow(a, bd.q_plus - 1.0));
  const double gab = G.g(a * b), gb = G.g(b);
  return leq(lo * Gb, Gab) && leq(Gab, hi * Gb) && leq(glo * gb, gab) && leq(gab, ghi * gb);
}

bool zeta_sandwich_check(double modular, double norm, const NFunction& G) {
  const auto bd = G.bounds();
  return leq(zeta_minus(norm, bd), modular) && leq(modular, zeta_plus(norm, bd));
}

bool young_check(const NFunction& G, double a, double t) {
  return leq(a * t, G.G(t) + G.G_tilde(a));
}

bool conjugate_bound_check(const NFunction& G, double t) {
  return leq(G.G_tilde(G.g(t)), (G.bounds().q_plus - 1.0) * G.G(t));
}

bool holder_orlicz_check(std::span<const double> m_samples, std::span<const double> f_samples,
                         std::span<const double> weights, const NFunction& G) {
  if (m_samples.size() != f_samples.size() || m_samples.size() != weights.size())
    throw ContractError("holder_orlicz_check: size mismatch");
  double lhs = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) lhs += weights[i] * std::abs(m_samples[i] * f_samples[i]);
  const double rhs = 2.0 * luxemburg_norm(m_samples, weights, G) * luxemburg_norm_conjugate(f_samples, weights, G);
  return leq(lhs, rhs);
}

bool ess_stronger_check(const std::function<double(double)>& A, const std::function<double(double)>& B,
                        double k) {
  if (!(k > 0.0)) throw DomainError("ess_stronger_check: k must be positive");
  std::vector<double> ts, ratios;
  for (int j = 0; j <= 32; ++j) {
    const double t = std::pow(10.0, j / 4.0);
    const double r = A(k * t) / B(t);
    if (!std::isfinite(r) || r < 0.0) return false;
    ts.push_back(t);
    ratios.push_back(r);
  }
  // Judge the trend on the last three decades.
  const std::size_t tail = ratios.size() - 13;
  for (std::size_t j = tail + 1; j < ratios.size(); ++j)
    if (!(ratios[j] < ratios[j - 1] * (1.0 - 1e-9))) return false;
  if (ratios.back() == 0.0) return true;
  const double slope = std::log(ratios.back() / ratios[tail]) / std::log(ts.back() / ts[tail]);
  return slope < -1e-3;
}

}  // namespace fracwell
