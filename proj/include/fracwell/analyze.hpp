#pragma once

// Post-processing of traces into verdicts: decay, blowup, ground states and the
// long-time behaviour of global runs.

#include <string>
#include <vector>

#include "fracwell/evolve.hpp"
#include "fracwell/functionals.hpp"

namespace fracwell {

struct DecayVerdict {
  bool applicable = true;
  std::string notice;
  bool monotone = true;             // every record-to-record change of l2h is <= 0
  bool strictly_decreasing = true;  // every change is < 0
  double fit_rate = 0.0;            // slope of log l2h over the second half
  double fit_r2 = 1.0;
  bool bracket_ok = true;
  bool comparable_ok = true;
  double comparable_C = 0.0;        // max [u]^2_{s,2} / pairing along the trace
  bool comparable_from_l2h = false; // seminorm unavailable; l2h used as an upper bound
};

DecayVerdict verify_decay(const Trace& trace, const WellConstants& consts);

struct BlowupVerdict {
  bool conclusive = true;
  bool detected = false;
  double t_blow_est = 0.0;    // NaN when F^{-theta} shows no decreasing trend
  double theta = 0.0;         // (p - 1) / 4
  double xi_min = 0.0;        // min of -2I - (p+3) diss
  bool I_always_negative = false;
  bool cauchy_schwarz_ok = true;  // (F')^2 <= 4 F diss at every record
  double concavity_residual = 0.0;  // max |F'' + 2I| relative to max |I|
};

// `overflow` is the run's non-finite termination flag.
BlowupVerdict detect_blowup(const Trace& trace, double p, bool overflow = false,
                            double threshold = 1e6);

struct GroundState {
  Field u_star;
  double J_star = 0.0;
  double dual_residual = 0.0;
  double nehari_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  bool stagnated = false;
};

// Alternates Nehari projection with descent along the plain residual -J'(u)/h,
// Barzilai-Borwein initial steps and Armijo backtracking on J after projection.
GroundState ground_state_solve(const Model& model, const Field& seed, int iters, double tol = 1e-6);

struct OmegaReport {
  bool empty = true;
  std::vector<double> t;
  std::vector<double> J;
  std::vector<double> dual;
  std::vector<double> dist_zero;
  std::vector<double> dist_ground;
  bool J_monotone = true;
  double J_limit = 0.0;
  bool limit_in_range = true;  // J_limit in [0, J(u0)]
  bool dual_trend_decreasing = false;
  std::string selected;        // "0" or "u_star"
  bool distance_trend_decreasing = false;
};

OmegaReport omega_limit_check(const std::vector<Snapshot>& snapshots, const GroundState& ground,
                              const Model& model);

// Least-squares line y = a + b x.
struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double r2 = 1.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace fracwell
