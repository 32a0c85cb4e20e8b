#pragma once

// Time integration of K u_t = -grad rho(u) + h |u|^{p-1} u, K = h I + L, with
// an energy-identity monitor and step rejection by dt halving.

#include <string>
#include <vector>

#include "fracwell/functionals.hpp"
#include "fracwell/trace.hpp"

namespace fracwell {

enum class Scheme { Explicit, Picard };
enum class RunStatus { Completed, BlowupDetected, BlowupSuspected, StepFailure };

std::string to_string(Scheme s);
std::string to_string(RunStatus s);

struct StepperOptions {
  Scheme scheme = Scheme::Explicit;
  double dt = 1e-3;
  double t_end = 1.0;
  int picard_max_iters = 50;
  double picard_tol = 1e-10;
  int record_every = 1;      // accepted steps between trace records
  int snapshot_every = 0;    // records between stored fields (0: none)
  int max_halvings = 10;
  double blowup_threshold = 1e6;
  // A step is a drift spike when its energy defect exceeds spike_factor times the
  // running median and spike_floor times its own dissipation increment.
  double spike_factor = 10.0;
  double spike_floor = 0.5;
};

// grad rho(u) / h: the discrete weak-form action of the magnetic operator.
Field magnetic_residual(const Field& u, const Model& model);

// K^{-1}(-grad rho(u) + h |u|^{p-1} u), the source dropped when the model disables it.
Eigen::VectorXcd flow_velocity(const Field& u, const Model& model);

struct StepOutcome {
  Field next;
  bool finite = true;
  bool converged = true;
  int iterations = 0;
};

class Stepper {
 public:
  Stepper(const Model& model, StepperOptions opts);

  // One step of size `dt` from u. Never throws on overflow; the outcome carries it.
  StepOutcome step(const Field& u, double dt) const;
  StepOutcome step(const Field& u) const { return step(u, dt_); }

  double dt() const noexcept { return dt_; }
  void set_dt(double dt);
  const StepperOptions& options() const noexcept { return opts_; }

 private:
  const Model* model_;
  StepperOptions opts_;
  double dt_;
};

struct Snapshot {
  double t;
  Field u;
};

struct Trajectory {
  Trace trace;
  std::vector<Snapshot> snapshots;
  RunStatus status = RunStatus::Completed;
  bool overflow = false;  // non-finite values ended the run
  int halvings = 0;
  double final_dt = 0.0;
  Field final_field;
};

Trajectory evolve(const Field& u0, const Model& model, const StepperOptions& opts);

struct EnergyMonitor {
  double drift = 0.0;           // max over records of |diss + J - J0| / max(|J0|, 1)
  double dJ_residual = 0.0;     // max |dJ/dt + |u_t|^2| relative to max |u_t|^2
  double dl2h_residual = 0.0;   // max |(1/2) d l2h/dt + I| relative to max |I|
  bool diss_nondecreasing = true;
};

EnergyMonitor energy_monitor(const Trace& trace);

}  // namespace fracwell
