#pragma once

#include <limits>
#include <vector>

namespace fracwell {

// One row of a trajectory trace. `diss` is the running integral of |u_t|^2 in the
// (mass + stiffness) norm; `F` is the blowup functional with T0 the run horizon.
struct TraceRecord {
  double t = 0.0;
  double J = 0.0;
  double I = 0.0;
  double l2h = 0.0;
  double lp1 = 0.0;
  double ut_l2h = 0.0;
  double diss = 0.0;
  double F = 0.0;
  double drift = 0.0;
  // [u]^2_{s,2}; not part of the CSV schema, NaN when read back from disk.
  double seminorm2 = std::numeric_limits<double>::quiet_NaN();

  double pairing() const noexcept { return I + lp1; }
};

using Trace = std::vector<TraceRecord>;

}  // namespace fracwell
