// Finite atomic measures on the real line: potential functions, convex
// order, common mass and the irreducible decomposition used to split a
// martingale transport problem into independent blocks.
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mot {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Raised when an operation requires mu <=_c nu and the check fails.
struct NotInConvexOrder : std::runtime_error {
  explicit NotInConvexOrder(const std::string& what) : std::runtime_error(what) {}
};

struct MeasureMeta {
  // Provenance flag: true when the measure was produced by discretizing a
  // density. Carries no mathematical force.
  bool absolutely_continuous_origin = false;
  // Uniform shift applied to the atoms after construction (discretizers and
  // mean matching record it here).
  double mean_shift = 0.0;
};

/// A nonnegative finite measure with finitely many atoms. Atoms are kept
/// strictly increasing; atoms closer than 1e-12 are merged on construction
/// and zero-weight atoms are dropped.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;
  DiscreteMeasure(VectorXd atoms, VectorXd weights, MeasureMeta meta = {});

  static DiscreteMeasure dirac(double atom, double weight = 1.0);
  static DiscreteMeasure from_pairs(std::vector<std::pair<double, double>> xw,
                                    MeasureMeta meta = {});

  Index size() const { return atoms_.size(); }
  bool empty() const { return atoms_.size() == 0; }
  const VectorXd& atoms() const { return atoms_; }
  const VectorXd& weights() const { return weights_; }
  double atom(Index i) const { return atoms_(i); }
  double weight(Index i) const { return weights_(i); }
  const MeasureMeta& meta() const { return meta_; }
  MeasureMeta& meta() { return meta_; }

  double mass() const { return weights_.sum(); }
  /// First moment, sum of w_i * x_i (not normalized).
  double first_moment() const { return weights_.dot(atoms_); }
  /// Barycenter; zero for the empty measure.
  double mean() const;

  bool is_probability(double tol = 1e-12) const;

  /// Integral of f against the measure.
  template <typename F>
  double integrate(F&& f) const {
    double acc = 0.0;
    for (Index i = 0; i < size(); ++i) acc += weights_(i) * f(atoms_(i));
    return acc;
  }

  DiscreteMeasure normalized() const;
  DiscreteMeasure scaled(double factor) const;
  /// Copy with every atom shifted by delta; the shift is recorded in meta.
  DiscreteMeasure shifted(double delta) const;
  /// Restriction to the open interval (lo, hi).
  DiscreteMeasure restricted_to_open(double lo, double hi) const;

  /// Weight at point x (atoms match within the dedup tolerance), 0 if absent.
  double weight_at(double x) const;

 private:
  VectorXd atoms_;    // strictly increasing
  VectorXd weights_;  // >= 0, same length
  MeasureMeta meta_;
};

/// Tolerance used to merge nearly identical atoms.
inline constexpr double kAtomMergeTol = 1e-12;

/// Potential function u_xi(x) = sum_i w_i |x - a_i|; convex and piecewise
/// linear with kinks exactly at the atoms.
double potential(const DiscreteMeasure& xi, double x);
VectorXd potential(const DiscreteMeasure& xi, const VectorXd& xs);

struct ConvexOrderResult {
  enum class Failure { none, mass_mismatch, mean_mismatch, potential };
  bool ordered = false;
  Failure failure = Failure::none;
  // Point where u_mu > u_nu + tol, or the offending moment difference.
  double witness = 0.0;
  std::string reason;
  explicit operator bool() const { return ordered; }
};

/// Checks mu <=_c nu for measures of equal mass. Sufficient and necessary for
/// atomic measures: equal mass, equal first moment, and u_mu <= u_nu on the
/// union of both atom sets.
ConvexOrderResult check_convex_order(const DiscreteMeasure& mu,
                                     const DiscreteMeasure& nu,
                                     double tol = 1e-9);

/// Largest measure rho with rho <= a and rho <= b (atom-wise minimum).
DiscreteMeasure common_mass(const DiscreteMeasure& a, const DiscreteMeasure& b);

/// One block of the decomposition of a convex-ordered pair. k = 0 collects
/// the atoms outside every interval (there mu_part == nu_part); k >= 1 blocks
/// carry an open interval with mu_part supported strictly inside and nu_part
/// in its closure.
struct IrreducibleComponent {
  int k = 0;
  std::optional<std::pair<double, double>> interval;  // nullopt for k = 0
  DiscreteMeasure mu_part;
  DiscreteMeasure nu_part;
};

/// Splits (mu, nu) along the maximal open intervals where u_mu < u_nu.
/// Components are returned with k = 0 first (only if it carries mass), then
/// k = 1, 2, ... ordered left to right. Throws NotInConvexOrder.
std::vector<IrreducibleComponent> irreducible_decomposition(
    const DiscreteMeasure& mu, const DiscreteMeasure& nu, double tol = 1e-9);

}  // namespace mot
