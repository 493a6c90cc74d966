// Martingale transport solvers and certificates: the relaxed upper bound,
// fixed-exercise and exact pure-strategy values, the alternating heuristic,
// superhedging dual extraction and verification, purity diagnostics, and the
// left-curtain reference coupling.
#pragma once

#include "mot/cost.hpp"
#include "mot/discrete_measure.hpp"
#include "mot/linear_program.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mot {

struct TooManyAtoms : std::runtime_error {
  explicit TooManyAtoms(const std::string& what) : std::runtime_error(what) {}
};

/// A component-indexed family (gamma_1, ..., gamma_L) of nonnegative mass
/// matrices over supp(mu) x supp(nu).
struct TransportPlan {
  VectorXd mu_atoms;
  VectorXd nu_atoms;
  std::vector<MatrixXd> gamma;  // L matrices, each |mu| x |nu|

  int num_components() const { return static_cast<int>(gamma.size()); }
  Index rows() const { return mu_atoms.size(); }
  Index cols() const { return nu_atoms.size(); }

  MatrixXd total() const;
  /// x-marginal of component l (1-based) as a measure; zero entries dropped.
  DiscreteMeasure x_marginal(int l) const;
  DiscreteMeasure y_marginal(int l) const;

  struct Feasibility {
    double marginal_residual = 0.0;    // worst marginal mismatch
    double martingale_residual = 0.0;  // worst row-barycenter defect (mass-relative)
  };
  Feasibility check_feasibility(const DiscreteMeasure& mu,
                                const DiscreteMeasure& nu) const;
};

/// Time-1 exercise fractions per mu atom; pure when every entry is 0 or 1.
struct ExerciseStrategy {
  VectorXd s;

  bool is_pure(double tol = 1e-12) const;
  DiscreteMeasure mu1(const DiscreteMeasure& mu) const;
  DiscreteMeasure mu2(const DiscreteMeasure& mu) const;
  static ExerciseStrategy constant(Index size, double value);
  static ExerciseStrategy from_mask(Index size, std::uint64_t mask);
};

/// Grid functions (phi, psi, theta_1..theta_L) witnessing the superhedging
/// inequality c_l(x,y) <= phi(x) + psi(y) + theta_l(x)(y - x).
struct DualCertificate {
  VectorXd phi;                 // over mu atoms
  VectorXd psi;                 // over nu atoms
  std::vector<VectorXd> theta;  // L vectors over mu atoms

  double value(const DiscreteMeasure& mu, const DiscreteMeasure& nu) const {
    return phi.dot(mu.weights()) + psi.dot(nu.weights());
  }
};

struct SlackReport {
  double feasibility = 0.0;  // worst violation of the dual inequality
  double tightness = 0.0;    // mass-weighted residual over the plan support
};

struct PurityReport {
  DiscreteMeasure mu1;
  DiscreteMeasure mu2;
  double overlap_mass = 0.0;
};

struct HeuristicOptions {
  int restarts = 8;
  int max_iters = 50;
  std::uint64_t seed = 0x2545f4914f6cdd1dULL;
};

struct PriceOptions {
  int max_enum_atoms = 16;   // pure-strategy enumeration cutoff per component
  double tol_scale = 1.0;    // scales every solver tolerance
  HeuristicOptions heuristic;
  double purity_tol = 1e-6;
};

struct RelaxedSolution {
  double p_bar = 0.0;
  TransportPlan plan;
  DualCertificate dual;
  int lp_iterations = 0;
};

struct FixedExerciseSolution {
  double value = 0.0;
  TransportPlan plan;  // (gamma_1, gamma_2) sharing one kernel
};

struct EnumerationSolution {
  double p_c = 0.0;
  ExerciseStrategy strategy;
  TransportPlan plan;
  int tie_count = 0;  // strategies attaining the maximum within gap_tol
};

struct AlternatingSolution {
  double lower_bound = 0.0;
  ExerciseStrategy strategy;
  TransportPlan plan;
  int iterations = 0;
};

struct CurtainResult {
  TransportPlan plan;  // single component
  bool left_monotone = false;
  // Violating support triple (i, j1, j2 from one row, i2, j_mid from a later
  // row) when the check fails.
  struct Violation {
    Index i = 0, j1 = 0, j2 = 0, i2 = 0, j_mid = 0;
  };
  std::optional<Violation> violation;
};

struct ComponentReport {
  int k = 0;
  std::optional<std::pair<double, double>> interval;
  double mass = 0.0;
  double p_bar = 0.0;
  double p_c = 0.0;
  bool p_c_is_exact = true;
};

struct SolveReport {
  double p_bar = 0.0;
  std::optional<double> p_c;
  bool p_c_is_exact = false;
  std::optional<double> gap;
  std::optional<ExerciseStrategy> strategy;
  TransportPlan plan;  // relaxed optimizer
  DualCertificate dual;
  double overlap_mass = 0.0;
  SlackReport slack;
  HypothesisReport hypotheses;
  std::vector<ComponentReport> components;
  std::map<std::string, double> timings_ms;
};

/// Upper bound over component-wise martingale families: each gamma_l only
/// needs a zero row-barycenter defect, the marginals bind jointly. Returns
/// the optimum with the LP duals arranged as a superhedging certificate, so
/// dual.value(mu, nu) equals p_bar up to the duality gap tolerance.
RelaxedSolution solve_relaxed(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                              const CostSpec& cost, const LpTolerances& tol = {});

/// Best market model for a fixed exercise fraction s: one martingale
/// transport pi with blended payoff s c1 + (1-s) c2, expanded afterwards
/// into (gamma_1, gamma_2) = (s pi, (1-s) pi) row-wise.
FixedExerciseSolution solve_fixed_exercise(const DiscreteMeasure& mu,
                                           const DiscreteMeasure& nu,
                                           const CostSpec& cost,
                                           const ExerciseStrategy& strategy,
                                           const LpTolerances& tol = {});

/// Exact price by enumerating all 2^m pure strategies (affine objective in
/// each s_i, so the optimum is pure). Throws TooManyAtoms above max_atoms.
EnumerationSolution solve_pure_enumeration(const DiscreteMeasure& mu,
                                           const DiscreteMeasure& nu,
                                           const CostSpec& cost,
                                           int max_atoms = 16,
                                           const LpTolerances& tol = {});

/// Coordinate-ascent lower bound: alternate the best model for a strategy
/// with the pointwise best strategy for the model, over seeded restarts.
AlternatingSolution solve_alternating(const DiscreteMeasure& mu,
                                      const DiscreteMeasure& nu,
                                      const CostSpec& cost,
                                      const HeuristicOptions& opts = {},
                                      const LpTolerances& tol = {});

/// Worst violation of the dual inequality over the full grid plus the
/// mass-weighted tightness residual over the plan support.
SlackReport verify_certificate(const TransportPlan& plan, const DualCertificate& dual,
                               const CostSpec& cost);

/// Marginals of the two components and their common mass; overlap 0 means a
/// pure (nonrandomized) exercise.
PurityReport purity_report(const TransportPlan& plan);

/// Left-curtain reference coupling, computed as the martingale transport
/// maximizing E[x y^2], then audited by the left-monotonicity checker.
CurtainResult left_curtain(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                           const LpTolerances& tol = {}, double mass_tol = 1e-9);

/// Full pipeline: global relaxed bound with certificate, decomposition into
/// irreducible blocks, per-block exact or heuristic exercise values, purity
/// and hypothesis diagnostics.
SolveReport price_american(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                           const CostSpec& cost, const PriceOptions& opts = {});

}  // namespace mot
