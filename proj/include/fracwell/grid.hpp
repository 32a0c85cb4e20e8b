#pragma once

// Uniform 1-D discretization of (a, b) with zero exterior padding, the pair
// quadrature for dx dy / |x - y| and the covariant difference quotients.

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

namespace fracwell {

using Complex = std::complex<double>;

// Interior nodes x = a + (i+1) h, i = 0..m-1, h = (b-a)/(m+1). The padded grid
// adds `pad` exterior nodes on each side (the boundary nodes a and b included),
// where the field is identically zero.
struct Domain1D {
  double a = -1.0;
  double b = 1.0;
  int m = 64;
  int pad = 64;

  double h() const noexcept { return (b - a) / (m + 1); }
  int total_nodes() const noexcept { return m + 2 * pad; }
  // Coordinate of padded index k in [0, total_nodes).
  double node(int k) const noexcept { return a + (k - pad + 1) * h(); }
  double interior_node(int i) const noexcept { return a + (i + 1) * h(); }
  bool is_interior(int k) const noexcept { return k >= pad && k < pad + m; }
  // Structural validity; the configuration layer enforces the stricter m >= 4, pad >= m.
  void validate() const;

  bool operator==(const Domain1D&) const = default;
};

struct Field {
  Domain1D domain;
  Eigen::VectorXcd values;  // interior nodes only

  Field() = default;
  Field(Domain1D d, Eigen::VectorXcd v);
  static Field zeros(const Domain1D& d);
  Eigen::Index size() const noexcept { return values.size(); }
};

enum class MagneticKind { Zero, Constant, Linear };

struct MagneticField {
  MagneticKind kind = MagneticKind::Zero;
  double c = 0.0;

  double operator()(double x) const noexcept {
    switch (kind) {
      case MagneticKind::Zero: return 0.0;
      case MagneticKind::Constant: return c;
      case MagneticKind::Linear: return c * x;
    }
    return 0.0;
  }
};

// One unordered node pair. `i` is always interior; `j` is interior (j > i) or
// -1 for an exterior node, in which case the field value there is zero.
struct PairEntry {
  int i;
  int j;
  double weight;     // h^2 / |x_i - x_j|
  double inv_rs;     // |x_i - x_j|^{-s}
  double inv_r2s;    // |x_i - x_j|^{-2s}
  Complex phase;     // exp(i (x_i - x_j) A((x_i + x_j)/2))
};

// Per-node incidence: pair index and whether the node is the pair's first entry.
struct Incidence {
  int pair;
  bool first;
};

struct KernelTable {
  Domain1D domain;
  double s = 0.5;
  MagneticField magnetic;
  std::vector<PairEntry> pairs;
  // CSR adjacency over interior nodes, for gather-form reductions.
  std::vector<int> offsets;
  std::vector<Incidence> incidence;

  // Sum of all pair weights over Q (ordered pairs, hence the factor 2).
  double kernel_mass() const;
};

KernelTable build_kernel(const Domain1D& domain, double s, const MagneticField& A);

// (u(x_i) - e^{i phi_ij} u(x_j)) / |x_i - x_j|^s per pair.
std::vector<Complex> covariant_quotient(const Field& u, const KernelTable& table);
// (u(x_i) - u(x_j)) / |x_i - x_j|^s per pair.
std::vector<Complex> plain_quotient(const Field& u, const KernelTable& table);

// Real symmetric L on interior nodes with u^H L u = 2 sum_pairs w |u_i - u_j|^2 / r^{2s},
// the discrete [u]^2_{s,2} over Q.
Eigen::MatrixXd assemble_fractional_stiffness(const KernelTable& table);

void require_same_grid(const Field& u, const KernelTable& table);

}  // namespace fracwell
