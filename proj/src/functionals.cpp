#include "fracwell/functionals.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <limits>
#include <numbers>

#include "fracwell/errors.hpp"

namespace fracwell {

namespace {

std::span<const Complex> view(const Eigen::VectorXcd& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

std::vector<double> pair_magnitudes(const Field& u, const Model& model) {
  require_same_grid(u, model.table());
  std::vector<Complex> d(model.table().pairs.size());
  std::vector<double> mags(d.size());
  kernels::quotients(model.exec(), view(u.values), model.table(), d);
  kernels::magnitudes(model.exec(), d, mags);
  return mags;
}

Eigen::VectorXcd source_term(const Field& u, double p) {
  Eigen::VectorXcd f(u.values.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) f[i] = std::pow(std::abs(u.values[i]), p - 1.0) * u.values[i];
  return f;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

Model::Model(ProblemParams params, Exec exec)
    : params_(std::move(params)),
      table_(build_kernel(params_.domain, params_.s, params_.magnetic)),
      stiffness_(assemble_fractional_stiffness(table_)),
      exec_(exec) {
  if (!(params_.p > 1.0)) throw ContractError("p must exceed 1");
  const Eigen::MatrixXd K = stiffness_ + h() * Eigen::MatrixXd::Identity(m(), m());
  metric_.compute(K);
  if (metric_.info() != Eigen::Success || !metric_.isPositive())
    throw InvariantError("mass plus stiffness is not positive definite");
}

Eigen::VectorXcd Model::solve_metric(const Eigen::VectorXcd& rhs) const {
  Eigen::MatrixXd parts(rhs.size(), 2);
  parts.col(0) = rhs.real();
  parts.col(1) = rhs.imag();
  const Eigen::MatrixXd sol = metric_.solve(parts);
  Eigen::VectorXcd out(rhs.size());
  out.real() = sol.col(0);
  out.imag() = sol.col(1);
  return out;
}

double Model::stiffness_norm2(const Eigen::VectorXcd& v) const {
  const Eigen::VectorXd re = v.real();
  const Eigen::VectorXd im = v.imag();
  return re.dot(stiffness_ * re) + im.dot(stiffness_ * im);
}

double Model::metric_norm2(const Eigen::VectorXcd& v) const { return h() * v.squaredNorm() + stiffness_norm2(v); }

RayProfile::RayProfile(const Field& u, const Model& model)
    : model_(&model), mags_(pair_magnitudes(u, model)), p_(model.p()) {
  lp1_ = model.h() * kernels::nodal_power_sum(model.exec(), view(u.values), p_ + 1.0);
  const NFunction& G = model.G();
  std::vector<double> exponents;
  if (G.kind() == NKind::Power) exponents = {G.param1()};
  if (G.kind() == NKind::PowerSum) exponents = {G.param1(), G.param2()};
  for (double q : exponents)
    power_terms_.emplace_back(q, kernels::pair_sums(model.exec(), mags_, model.table(), NFunction::power(q), 1.0).modular);
}

PairSums RayProfile::sums(double lambda) const {
  if (power_terms_.empty()) return kernels::pair_sums(model_->exec(), mags_, model_->table(), model_->G(), lambda);
  PairSums out;
  for (const auto& [q, unit] : power_terms_) {
    const double v = std::pow(lambda, q) * unit;
    out.modular += v;
    out.pairing += q * v;
  }
  return out;
}

double RayProfile::seminorm_A() const {
  double vmax = 0.0;
  for (double x : mags_) vmax = std::max(vmax, x);
  if (vmax == 0.0) return 0.0;
  const double mass = model_->table().kernel_mass();
  auto modular = [&](double lambda) {
    const PairSums s = sums(1.0 / lambda);
    return ModularValue{s.modular, -s.pairing / lambda};
  };
  return luxemburg_solve(modular, vmax / model_->G().G_inverse(1.0 / mass));
}

EnergyReport energy_report(const Field& u, const Model& model, ReportDetail detail) {
  const RayProfile ray(u, model);
  const PairSums s = ray.sums(1.0);
  EnergyReport r;
  r.rho_A = s.modular;
  r.pairing = s.pairing;
  r.lp1 = ray.lp1_unit();
  r.J = r.rho_A - r.lp1 / (model.p() + 1.0);
  r.I = r.pairing - r.lp1;
  r.l2 = model.h() * u.values.squaredNorm();
  r.seminorm2 = model.stiffness_norm2(u.values);
  r.l2h = r.l2 + r.seminorm2;
  r.seminorm_A = detail == ReportDetail::Full ? ray.seminorm_A() : kNaN;
  return r;
}

double lp1_norm_power(const Field& u, const Model& model) {
  require_same_grid(u, model.table());
  return model.h() * kernels::nodal_power_sum(model.exec(), view(u.values), model.p() + 1.0);
}

double seminorm_A(const Field& u, const Model& model) { return RayProfile(u, model).seminorm_A(); }

Eigen::VectorXcd modular_gradient(const Field& u, const Model& model) {
  require_same_grid(u, model.table());
  Eigen::VectorXcd grad(u.values.size());
  kernels::modular_gradient(model.exec(), view(u.values), model.table(), model.G(),
                            {grad.data(), static_cast<std::size_t>(grad.size())});
  return grad;
}

Eigen::VectorXcd energy_gradient(const Field& u, const Model& model) {
  return modular_gradient(u, model) - model.h() * source_term(u, model.p());
}

double dual_residual(const Field& u, const Model& model) {
  return energy_gradient(u, model).norm() / std::sqrt(model.h());
}

NehariProjection nehari_project(const RayProfile& ray, double delta) {
  if (!(ray.lp1_unit() > 0.0)) throw DomainError("Nehari projection undefined: zero nonlinear mass");
  if (!(delta > 0.0)) throw DomainError("Nehari projection needs delta > 0");
  const double p = ray.p();
  // In x = log(lambda) the map below is strictly decreasing (slope <= q+ - (p+1) < 0).
  auto f = [&](double x) {
    const double pairing = ray.sums(std::exp(x)).pairing;
    return std::log(delta * pairing) - (p + 1.0) * x - std::log(ray.lp1_unit());
  };
  double lo = 0.0, hi = 0.0;
  double flo = f(0.0), fhi = flo;
  for (double step = 1.0; fhi > 0.0; step *= 2.0) {
    lo = hi;
    flo = fhi;
    hi += step;
    fhi = f(hi);
    if (step > 1e3) throw DomainError("Nehari projection: no sign change");
  }
  for (double step = 1.0; flo < 0.0; step *= 2.0) {
    hi = lo;
    fhi = flo;
    lo -= step;
    flo = f(lo);
    if (step > 1e3) throw DomainError("Nehari projection: no sign change");
  }
  double x;
  if (flo == 0.0) {
    x = lo;
  } else if (fhi == 0.0) {
    x = hi;
  } else {
    std::uintmax_t iters = 200;
    auto tol = boost::math::tools::eps_tolerance<double>(std::numeric_limits<double>::digits - 1);
    auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
    x = 0.5 * (r.first + r.second);
  }
  const double lambda = std::exp(x);
  return {lambda, ray.J(lambda)};
}

NehariProjection nehari_project(const Field& u, const Model& model, double delta) {
  return nehari_project(RayProfile(u, model), delta);
}

double embedding_ratio(const Field& u, const Model& model) {
  const RayProfile ray(u, model);
  const double semi = ray.seminorm_A();
  if (semi == 0.0) throw DomainError("embedding ratio undefined for the zero field");
  return std::pow(ray.lp1_unit(), 1.0 / (model.p() + 1.0)) / semi;
}

Field random_trial(const Domain1D& d, Rng& rng, double amp_lo, double amp_hi) {
  const double L = d.b - d.a;
  const double center = d.a + L * rng.uniform(0.3, 0.7);
  const double width = L * rng.log_uniform(0.08, 0.3);
  const double c1 = 0.5 * rng.normal();
  const double c2 = 0.3 * rng.normal();
  const double theta0 = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double wave = rng.normal() * std::numbers::pi / L;
  const double amp = rng.log_uniform(amp_lo, amp_hi);
  Eigen::VectorXcd v(d.m);
  for (int i = 0; i < d.m; ++i) {
    const double x = d.interior_node(i);
    const double xi = (x - center) / width;
    const double env = std::exp(-xi * xi) * (1.0 + c1 * xi + c2 * xi * xi);
    v[i] = env * std::polar(1.0, theta0 + wave * (x - center));
  }
  const double vmax = v.cwiseAbs().maxCoeff();
  return Field(d, v * (amp / vmax));
}

std::vector<Field> trial_pool(const Domain1D& d, int trials, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Field> out;
  out.reserve(static_cast<std::size_t>(std::max(trials, 0)));
  for (int k = 0; k < trials; ++k) out.push_back(random_trial(d, rng));
  return out;
}

namespace {

struct RatioState {
  double log_ratio;
  double seminorm;
};

RatioState ratio_state(const Field& u, const Model& model) {
  const RayProfile ray(u, model);
  const double semi = ray.seminorm_A();
  return {std::log(ray.lp1_unit()) / (model.p() + 1.0) - std::log(semi), semi};
}

}  // namespace

Field climb_ratio(const Field& start, const Model& model, int iters) {
  RatioState st = ratio_state(start, model);
  Field u(start.domain, start.values / st.seminorm);
  st.seminorm = 1.0;
  double tau = 1.0;
  int flat = 0;
  const double h = model.h();
  const double p = model.p();
  for (int it = 0; it < iters; ++it) {
    // d log|u|_{p+1} = h |u|^{p-1} u / lp1; d log[u] = grad rho(v) / ([u] pairing(v)), v = u/[u].
    const RayProfile ray(u, model);
    const double semi = ray.seminorm_A();
    const Field v(u.domain, u.values / semi);
    const double pairing_v = ray.sums(1.0 / semi).pairing;
    const Eigen::VectorXcd grad =
        h * source_term(u, p) / ray.lp1_unit() - modular_gradient(v, model) / (semi * pairing_v);
    const Eigen::VectorXcd dir = model.solve_metric(grad);
    const double slope = (grad.conjugate().transpose() * dir)(0, 0).real();
    if (!(slope > 0.0)) break;
    bool accepted = false;
    for (int k = 0; k < 40; ++k) {
      const Field trial(u.domain, u.values + tau * dir);
      const RatioState ts = ratio_state(trial, model);
      if (ts.log_ratio >= st.log_ratio + 1e-4 * tau * slope) {
        const double gain = ts.log_ratio - st.log_ratio;
        u = Field(u.domain, trial.values / ts.seminorm);
        st = {ts.log_ratio, 1.0};
        tau = std::min(2.0 * tau, 1e6);
        accepted = true;
        flat = gain < 1e-13 ? flat + 1 : 0;
        break;
      }
      tau *= 0.5;
    }
    if (!accepted || flat >= 3) break;
  }
  return u;
}

CStarEstimate estimate_C_star(const Model& model, const WellOptions& opts) {
  if (opts.trials < 1) throw ContractError("estimate_C_star needs at least one trial");
  CStarEstimate out;
  out.pool = trial_pool(model.domain(), opts.trials, opts.seed);
  const int starts = std::min(opts.climb_starts, opts.trials);
  for (int k = 0; k < starts; ++k)
    out.pool.push_back(climb_ratio(out.pool[static_cast<std::size_t>(k)], model, opts.climb_iters));
  out.value = -1.0;
  for (const auto& u : out.pool) {
    const double r = embedding_ratio(u, model);
    if (r > out.value) {
      out.value = r;
      out.best = u;
    }
  }
  return out;
}

double estimate_C_star(const Model& model, int trials, std::uint64_t seed) {
  WellOptions opts;
  opts.trials = trials;
  opts.seed = seed;
  return estimate_C_star(model, opts).value;
}

double well_h(double delta, double C_star, const ExponentBounds& b, double p) {
  const double base = std::pow(b.q_minus, (p + 1.0) / b.q_minus) * delta / std::pow(C_star, p + 1.0);
  return std::min(std::pow(base, b.q_minus / (p + 1.0 - b.q_minus)), std::pow(base, b.q_plus / (p + 1.0 - b.q_plus)));
}

std::optional<double> WellConstants::lambda_alpha(double alpha) const {
  std::optional<double> best;
  for (const auto& s : samples)
    if (s.J <= alpha && (!best || s.l2h < *best)) best = s.l2h;
  return best;
}

double WellConstants::d_at(double delta) const {
  if (d_curve.empty()) throw ContractError("d curve not computed");
  if (delta <= d_curve.front().delta) return d_curve.front().d;
  if (delta >= d_curve.back().delta) return d_curve.back().d;
  auto it = std::lower_bound(d_curve.begin(), d_curve.end(), delta,
                             [](const DeltaPoint& a, double v) { return a.delta < v; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  return lo.d + (hi.d - lo.d) * (delta - lo.delta) / (hi.delta - lo.delta);
}

WellConstants well_constants(const Model& model, const CStarEstimate& cstar, int delta_points) {
  WellConstants wc;
  wc.C_star = cstar.value;
  wc.bounds = model.G().bounds();
  wc.p = model.p();
  const double p = wc.p;
  wc.h1 = wc.h(1.0);
  wc.M_const = (1.0 / wc.bounds.q_plus - 1.0 / (p + 1.0)) * std::min(wc.h1, 1.0);

  std::vector<RayProfile> rays;
  rays.reserve(cstar.pool.size());
  for (const auto& u : cstar.pool) rays.emplace_back(u, model);
  wc.d_est = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < rays.size(); ++k) {
    const auto proj = nehari_project(rays[k]);
    const double l = proj.lambda_star;
    const Field& u = cstar.pool[k];
    const double l2h = model.h() * u.values.squaredNorm() + model.stiffness_norm2(u.values);
    wc.samples.push_back({proj.J_at, l * l * l2h, rays[k].sums(l).pairing});
    wc.d_est = std::min(wc.d_est, proj.J_at);
  }

  auto d_of = [&](double delta) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : rays) best = std::min(best, nehari_project(r, delta).J_at);
    return best;
  };
  const double delta_max = (p + 1.0) / wc.bounds.q_minus;
  std::vector<double> deltas;
  const double l0 = std::log(0.01), l1 = std::log(delta_max);
  for (int k = 1; k <= delta_points; ++k) deltas.push_back(std::exp(l0 + (l1 - l0) * k / delta_points));
  deltas.back() = delta_max;
  if (std::find(deltas.begin(), deltas.end(), 1.0) == deltas.end()) {
    deltas.push_back(1.0);
    std::sort(deltas.begin(), deltas.end());
  }
  double dmax = 0.0;
  for (double delta : deltas) {
    wc.d_curve.push_back({delta, d_of(delta)});
    dmax = std::max(dmax, std::abs(wc.d_curve.back().d));
  }

  // Root of d on (1, delta_max]: first sign change, refined by bisection on d itself.
  for (std::size_t k = 1; k < wc.d_curve.size(); ++k) {
    const auto& a = wc.d_curve[k - 1];
    const auto& b = wc.d_curve[k];
    if (a.delta < 1.0) continue;
    if (a.d > 0.0 && b.d <= 0.0) {
      double lo = a.delta, hi = b.delta;
      for (int it = 0; it < 60 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (d_of(mid) > 0.0 ? lo : hi) = mid;
      }
      wc.b_root = 0.5 * (lo + hi);
      break;
    }
  }
  if (!wc.b_root && std::abs(wc.d_curve.back().d) <= 1e-10 * dmax) wc.b_root = wc.d_curve.back().delta;

  const auto& c0 = wc.d_curve[0];
  const auto& c1 = wc.d_curve[1];
  wc.d0 = std::max(0.0, c0.d - c0.delta * (c1.d - c0.d) / (c1.delta - c0.delta));
  return wc;
}

WellConstants well_constants(const Model& model, const WellOptions& opts) {
  return well_constants(model, estimate_C_star(model, opts), opts.delta_points);
}

std::optional<double> estimate_lambda_alpha(double alpha, const Model& model, const WellOptions& opts) {
  std::optional<double> best;
  for (const auto& u : trial_pool(model.domain(), opts.trials, opts.seed)) {
    const RayProfile ray(u, model);
    const auto proj = nehari_project(ray);
    if (proj.J_at > alpha) continue;
    const double l2h = model.h() * u.values.squaredNorm() + model.stiffness_norm2(u.values);
    const double v = proj.lambda_star * proj.lambda_star * l2h;
    if (!best || v < *best) best = v;
  }
  return best;
}

std::string to_string(WellClass c) {
  switch (c) {
    case WellClass::W: return "W";
    case WellClass::V: return "V";
    case WellClass::NehariBoundary: return "nehari-boundary";
    case WellClass::HighEnergyStable: return "high-energy-stable";
    case WellClass::HighEnergyUnknown: return "high-energy-unknown";
  }
  return "unknown";
}

bool on_nehari_boundary(const EnergyReport& r) {
  return std::abs(r.I) <= 1e-8 * std::max(r.pairing, r.lp1);
}

WellClass classify(const EnergyReport& r, const WellConstants& consts) {
  if (r.lp1 == 0.0 && r.pairing == 0.0) return WellClass::W;
  const bool boundary = on_nehari_boundary(r);
  if (r.J < consts.d_est) {
    if (boundary) return WellClass::NehariBoundary;
    return r.I > 0.0 ? WellClass::W : WellClass::V;
  }
  if (r.J > consts.d_est && r.I > 0.0 && !boundary) {
    const auto lam = consts.lambda_alpha(r.J);
    if (lam && r.l2h <= *lam) return WellClass::HighEnergyStable;
  }
  return WellClass::HighEnergyUnknown;
}

InvarianceAudit invariance_audit(const Trace& trace, const WellConstants& consts,
                                 const std::vector<double>& delta_grid) {
  InvarianceAudit out;
  if (trace.empty()) {
    out.skipped = true;
    out.notice = "empty trace";
    return out;
  }
  const double J0 = trace.front().J;
  if (J0 >= consts.d_est) {
    out.skipped = true;
    out.notice = "J(u0) >= d: audit not applicable";
    return out;
  }
  if (!(J0 > 0.0)) {
    out.skipped = true;
    out.notice = "J(u0) <= 0: d(delta) = J(u0) has no roots";
    return out;
  }
  const auto& c = consts.d_curve;
  // Left root: largest delta <= 1 where d falls to J0; right root: first delta > 1 where it does.
  out.delta1 = 0.0;
  out.delta2 = c.back().delta;
  for (std::size_t k = c.size() - 1; k > 0; --k) {
    if (c[k].delta > 1.0) continue;
    if (c[k - 1].d <= J0 && c[k].d > J0) {
      out.delta1 = c[k - 1].delta + (J0 - c[k - 1].d) * (c[k].delta - c[k - 1].delta) / (c[k].d - c[k - 1].d);
      break;
    }
  }
  for (std::size_t k = 1; k < c.size(); ++k) {
    if (c[k - 1].delta < 1.0) continue;
    if (c[k - 1].d > J0 && c[k].d <= J0) {
      out.delta2 = c[k - 1].delta + (J0 - c[k - 1].d) * (c[k].delta - c[k - 1].delta) / (c[k].d - c[k - 1].d);
      break;
    }
  }
  for (double delta : delta_grid) {
    if (!(delta > out.delta1 && delta < out.delta2)) continue;
    int sign = 0;
    bool constant = true;
    for (const auto& rec : trace) {
      const double v = delta * rec.pairing() - rec.lp1;
      const int sg = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
      if (sg == 0) continue;
      if (sign == 0) sign = sg;
      else if (sg != sign) constant = false;
    }
    out.entries.push_back({delta, constant, constant ? sign : 0});
  }
  return out;
}

bool nonlinear_lipschitz_check(Complex u1, Complex u2, double p) {
  const Complex f1 = std::pow(std::abs(u1), p - 1.0) * u1;
  const Complex f2 = std::pow(std::abs(u2), p - 1.0) * u2;
  const double lhs = std::abs(f1 - f2);
  const double rhs = p * std::pow(std::abs(u1) + std::abs(u2), p - 1.0) * std::abs(u1 - u2);
  return lhs <= rhs + 1e-12 * (lhs + rhs) + 1e-300;
}

MonotoneGap monotone_operator_check(Complex a, Complex b, const NFunction& G) {
  auto term = [&](Complex z) { return std::abs(z) > 0.0 ? G.g(std::abs(z)) * z / std::abs(z) : Complex{}; };
  const double lhs = ((term(a) - term(b)) * std::conj(a - b)).real();
  return {lhs, G.G(std::abs(a - b))};
}

}  // namespace fracwell
