// Payoff specifications: parametric families, tabulated grids, and the
// convexity / diagonal-separation checks that decide whether an instance
// sits in the regime where optimal exercise is provably pure.
#pragma once

#include "mot/discrete_measure.hpp"

#include <string>
#include <vector>

namespace mot {

enum class PayoffForm {
  constant,         // a
  put_of_x,         // (K - x)^+
  put_of_y,         // (K - y)^+
  put_of_y_plus_quad,  // (K - y)^+ + eps * y^2
  square_of_y,      // y^2
  quadratic_spread, // (y - x)^2
  table,            // values over the bound grid
};

/// One payoff component c_l. Parametric forms evaluate anywhere; the table
/// form is bound to a (mu_atoms, nu_atoms) grid and rejects off-grid queries.
struct CostComponent {
  PayoffForm form = PayoffForm::constant;
  double a = 0.0;    // constant value
  double strike = 0.0;
  double eps = 0.0;
  bool x_only = false;  // true when the component never reads y
  VectorXd grid_x, grid_y;   // table binding
  MatrixXd table;            // size |grid_x| x |grid_y| (one column if x_only)

  static CostComponent constant(double value);
  static CostComponent put_of_x(double strike);
  static CostComponent put_of_y(double strike);
  static CostComponent put_of_y_plus_quad(double strike, double eps);
  static CostComponent square_of_y();
  static CostComponent quadratic_spread();
  static CostComponent table_of_x(VectorXd grid_x, VectorXd values);
  static CostComponent table_of_xy(VectorXd grid_x, VectorXd grid_y, MatrixXd values);

  double eval(double x, double y) const;
};

enum class CostKind { american, generic };

/// The payoff vector (c_1, ..., c_L). American kind fixes L = 2 with c_1
/// independent of y.
struct CostSpec {
  CostKind kind = CostKind::generic;
  std::vector<CostComponent> components;

  static CostSpec american_put(double strike1, double strike2);
  static CostSpec put_plus_quadratic(double strike1, double strike2, double eps);
  static CostSpec quadratic_spread();
  static CostSpec constant(double value, int num_components = 1);
  static CostSpec american(CostComponent c1, CostComponent c2);
  static CostSpec generic(std::vector<CostComponent> components);

  int num_components() const { return static_cast<int>(components.size()); }
  bool is_american() const { return kind == CostKind::american; }

  /// c_l(x, y) with 1-based component index l.
  double evaluate(int l, double x, double y) const;
};

struct HypothesisReport {
  // (a) y -> c_2(x, y) strictly convex on the working grid.
  bool strict_convexity = false;
  double min_second_difference = 0.0;
  // (b) c_1(x) != c_2(x, x) at every mu atom.
  bool diagonal_separated = false;
  double min_diagonal_gap = 0.0;   // min |c1 - c2(x,x)|
  int diagonal_sign = 0;           // +1 all c1 > c2(x,x), -1 all below, 0 mixed
  // (c) provenance of nu.
  bool nu_absolutely_continuous_origin = false;
  std::string note;
};

/// Advisory checks of the purity hypotheses for an American cost on the grid
/// spanned by the marginals. Never blocks solving.
HypothesisReport check_theorem_hypotheses(const CostSpec& cost,
                                          const DiscreteMeasure& mu,
                                          const DiscreteMeasure& nu);

}  // namespace mot
