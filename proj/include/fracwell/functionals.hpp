#pragma once

// Energy, Nehari and potential-well quantities of the discretized problem.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fracwell/grid.hpp"
#include "fracwell/kernels.hpp"
#include "fracwell/nfunc.hpp"
#include "fracwell/rng.hpp"
#include "fracwell/trace.hpp"

namespace fracwell {

struct ProblemParams {
  Domain1D domain;
  double s = 0.5;
  double p = 3.0;
  MagneticField magnetic;
  NFunction G = NFunction::power(2.0);
  // Whether the source |u|^{p-1} u enters the flow; off only for linear checks.
  bool source = true;
};

// A problem instance with its kernel table, stiffness matrix and the factorized
// metric K = h I + L (lumped mass plus fractional stiffness).
class Model {
 public:
  explicit Model(ProblemParams params, Exec exec = Exec::Parallel);

  const ProblemParams& params() const noexcept { return params_; }
  const KernelTable& table() const noexcept { return table_; }
  const NFunction& G() const noexcept { return params_.G; }
  const Domain1D& domain() const noexcept { return params_.domain; }
  const Eigen::MatrixXd& stiffness() const noexcept { return stiffness_; }
  Exec exec() const noexcept { return exec_; }
  double h() const noexcept { return params_.domain.h(); }
  double p() const noexcept { return params_.p; }
  int m() const noexcept { return params_.domain.m; }

  // K^{-1} rhs, real and imaginary parts solved together.
  Eigen::VectorXcd solve_metric(const Eigen::VectorXcd& rhs) const;
  // v^H K v.
  double metric_norm2(const Eigen::VectorXcd& v) const;
  // v^H L v = [v]^2_{s,2}.
  double stiffness_norm2(const Eigen::VectorXcd& v) const;

 private:
  ProblemParams params_;
  KernelTable table_;
  Eigen::MatrixXd stiffness_;
  Eigen::LDLT<Eigen::MatrixXd> metric_;
  Exec exec_;
};

struct EnergyReport {
  double rho_A = 0.0;       // modular of D_s^A u
  double J = 0.0;           // rho_A - lp1/(p+1)
  double I = 0.0;           // pairing - lp1
  double pairing = 0.0;     // int g(|D|)|D| dmu
  double lp1 = 0.0;         // |u|_{p+1}^{p+1}
  double l2h = 0.0;         // |u|_2^2 + [u]^2_{s,2}
  double seminorm_A = 0.0;  // Luxemburg [u]^A_{s,G}
  double l2 = 0.0;          // |u|_2^2
  double seminorm2 = 0.0;   // [u]^2_{s,2}
};

enum class ReportDetail { Full, Scalars };

// Scalars skips the Luxemburg solve (seminorm_A is then NaN).
EnergyReport energy_report(const Field& u, const Model& model, ReportDetail detail = ReportDetail::Full);

double lp1_norm_power(const Field& u, const Model& model);
double seminorm_A(const Field& u, const Model& model);

// Gradient of the modular with respect to (Re u_i, Im u_i), as complex numbers.
Eigen::VectorXcd modular_gradient(const Field& u, const Model& model);
// Gradient of J: modular gradient minus h |u|^{p-1} u.
Eigen::VectorXcd energy_gradient(const Field& u, const Model& model);
// sqrt(h sum |J'(u)_i / h|^2): discrete L^2 norm of the strong residual, a
// surrogate for the dual norm.
double dual_residual(const Field& u, const Model& model);

// Quantities along the ray lambda -> lambda u, sharing one pass of |D u|.
class RayProfile {
 public:
  RayProfile(const Field& u, const Model& model);
  PairSums sums(double lambda) const;
  double lp1(double lambda) const { return std::pow(lambda, p_ + 1.0) * lp1_; }
  double I(double lambda, double delta = 1.0) const { return delta * sums(lambda).pairing - lp1(lambda); }
  double J(double lambda) const { return sums(lambda).modular - lp1(lambda) / (p_ + 1.0); }
  double seminorm_A() const;
  double lp1_unit() const noexcept { return lp1_; }
  double p() const noexcept { return p_; }

 private:
  const Model* model_;
  std::vector<double> mags_;
  double lp1_;
  double p_;
  // For power-type G, sums along the ray are sum_k lambda^{q_k} S_k: (q_k, S_k).
  std::vector<std::pair<double, double>> power_terms_;
};

struct NehariProjection {
  double lambda_star;
  double J_at;
};

// Unique lambda > 0 with delta * pairing(lambda u) = lp1(lambda u).
NehariProjection nehari_project(const Field& u, const Model& model, double delta = 1.0);
NehariProjection nehari_project(const RayProfile& ray, double delta = 1.0);

// |u|_{p+1} / [u]^A_{s,G}.
double embedding_ratio(const Field& u, const Model& model);

// Random trial: Gaussian bump times a quadratic polynomial times a random complex
// phase, with log-uniform amplitude in [amp_lo, amp_hi].
Field random_trial(const Domain1D& d, Rng& rng, double amp_lo = 1e-2, double amp_hi = 1e2);
// The first k trials do not depend on the total count.
std::vector<Field> trial_pool(const Domain1D& d, int trials, std::uint64_t seed);

struct WellOptions {
  int trials = 64;
  int climb_starts = 4;
  int climb_iters = 150;
  int delta_points = 64;
  std::uint64_t seed = 1;
};

struct CStarEstimate {
  double value = 0.0;
  Field best;
  // Every field whose ratio entered the maximum: the raw pool plus climbed fields.
  std::vector<Field> pool;
};

// Sobolev-preconditioned gradient ascent on log(|u|_{p+1} / [u]^A).
Field climb_ratio(const Field& start, const Model& model, int iters);

// Max of the embedding ratio over the trial pool and over ascents started from
// the first `climb_starts` trials.
CStarEstimate estimate_C_star(const Model& model, const WellOptions& opts);
double estimate_C_star(const Model& model, int trials, std::uint64_t seed = 1);

// min of the two-branch expression defining h(delta).
double well_h(double delta, double C_star, const ExponentBounds& b, double p);

struct NehariSample {
  double J = 0.0;
  double l2h = 0.0;
  double pairing = 0.0;
};

struct DeltaPoint {
  double delta;
  double d;
};

struct WellConstants {
  double C_star = 0.0;
  ExponentBounds bounds{2.0, 2.0};
  double p = 3.0;
  double h1 = 0.0;
  double M_const = 0.0;
  double d_est = 0.0;
  std::vector<DeltaPoint> d_curve;
  double d0 = 0.0;
  std::optional<double> b_root;
  std::vector<NehariSample> samples;

  double h(double delta) const { return well_h(delta, C_star, bounds, p); }
  // min |u|^2_{s,2,0} over Nehari samples with J <= alpha.
  std::optional<double> lambda_alpha(double alpha) const;
  // d(delta) interpolated linearly on the sampled curve.
  double d_at(double delta) const;
};

WellConstants well_constants(const Model& model, const WellOptions& opts);
// Same constants from an already estimated C* and its pool.
WellConstants well_constants(const Model& model, const CStarEstimate& cstar, int delta_points = 64);

std::optional<double> estimate_lambda_alpha(double alpha, const Model& model, const WellOptions& opts);

enum class WellClass { W, V, NehariBoundary, HighEnergyStable, HighEnergyUnknown };
std::string to_string(WellClass c);

bool on_nehari_boundary(const EnergyReport& r);
WellClass classify(const EnergyReport& report, const WellConstants& consts);

struct DeltaAudit {
  double delta;
  bool constant_sign;
  int sign;  // +1, -1 or 0 when the sign changed
};

struct InvarianceAudit {
  bool skipped = false;
  std::string notice;
  double delta1 = 0.0;
  double delta2 = 0.0;
  std::vector<DeltaAudit> entries;  // only deltas strictly inside (delta1, delta2)
};

InvarianceAudit invariance_audit(const Trace& trace, const WellConstants& consts,
                                 const std::vector<double>& delta_grid);

// ||u1|^{p-1} u1 - |u2|^{p-1} u2| <= p (|u1| + |u2|)^{p-1} |u1 - u2|.
bool nonlinear_lipschitz_check(Complex u1, Complex u2, double p);

struct MonotoneGap {
  double lhs;    // Re[(g(|a|) a/|a| - g(|b|) b/|b|) conj(a - b)]
  double G_gap;  // G(|a - b|)
};
MonotoneGap monotone_operator_check(Complex a, Complex b, const NFunction& G);

}  // namespace fracwell
