#include "mot/cost.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mot {

namespace {

Index grid_lookup(const VectorXd& grid, double v, const char* axis) {
  Index lo = 0, hi = grid.size() - 1;
  while (lo <= hi) {
    const Index mid = (lo + hi) / 2;
    if (std::abs(grid(mid) - v) < kAtomMergeTol) return mid;
    if (grid(mid) < v)
      lo = mid + 1;
    else
      hi = mid - 1;
  }
  throw std::out_of_range(std::string("tabulated cost queried off-grid on ") + axis);
}

}  // namespace

CostComponent CostComponent::constant(double value) {
  CostComponent c;
  c.form = PayoffForm::constant;
  c.a = value;
  c.x_only = true;
  return c;
}

CostComponent CostComponent::put_of_x(double strike) {
  CostComponent c;
  c.form = PayoffForm::put_of_x;
  c.strike = strike;
  c.x_only = true;
  return c;
}

CostComponent CostComponent::put_of_y(double strike) {
  CostComponent c;
  c.form = PayoffForm::put_of_y;
  c.strike = strike;
  return c;
}

CostComponent CostComponent::put_of_y_plus_quad(double strike, double eps) {
  if (eps <= 0.0) throw std::invalid_argument("put_of_y_plus_quad: eps must be > 0");
  CostComponent c;
  c.form = PayoffForm::put_of_y_plus_quad;
  c.strike = strike;
  c.eps = eps;
  return c;
}

CostComponent CostComponent::square_of_y() {
  CostComponent c;
  c.form = PayoffForm::square_of_y;
  return c;
}

CostComponent CostComponent::quadratic_spread() {
  CostComponent c;
  c.form = PayoffForm::quadratic_spread;
  return c;
}

CostComponent CostComponent::table_of_x(VectorXd grid_x, VectorXd values) {
  if (grid_x.size() != values.size())
    throw std::invalid_argument("table_of_x: grid/value length mismatch");
  CostComponent c;
  c.form = PayoffForm::table;
  c.x_only = true;
  c.grid_x = std::move(grid_x);
  c.table = values;
  return c;
}

CostComponent CostComponent::table_of_xy(VectorXd grid_x, VectorXd grid_y,
                                         MatrixXd values) {
  if (values.rows() != grid_x.size() || values.cols() != grid_y.size())
    throw std::invalid_argument("table_of_xy: grid/value shape mismatch");
  CostComponent c;
  c.form = PayoffForm::table;
  c.grid_x = std::move(grid_x);
  c.grid_y = std::move(grid_y);
  c.table = std::move(values);
  return c;
}

double CostComponent::eval(double x, double y) const {
  switch (form) {
    case PayoffForm::constant:
      return a;
    case PayoffForm::put_of_x:
      return std::max(strike - x, 0.0);
    case PayoffForm::put_of_y:
      return std::max(strike - y, 0.0);
    case PayoffForm::put_of_y_plus_quad:
      return std::max(strike - y, 0.0) + eps * y * y;
    case PayoffForm::square_of_y:
      return y * y;
    case PayoffForm::quadratic_spread:
      return (y - x) * (y - x);
    case PayoffForm::table: {
      const Index i = grid_lookup(grid_x, x, "x");
      if (x_only) return table(i, 0);
      const Index j = grid_lookup(grid_y, y, "y");
      return table(i, j);
    }
  }
  throw std::logic_error("CostComponent: unknown form");
}

CostSpec CostSpec::american(CostComponent c1, CostComponent c2) {
  if (!c1.x_only)
    throw std::invalid_argument("american cost: component 1 must not depend on y");
  CostSpec spec;
  spec.kind = CostKind::american;
  spec.components = {std::move(c1), std::move(c2)};
  return spec;
}

CostSpec CostSpec::american_put(double strike1, double strike2) {
  if (!(strike1 > strike2))
    throw std::invalid_argument("american_put: requires K1 > K2");
  return american(CostComponent::put_of_x(strike1), CostComponent::put_of_y(strike2));
}

CostSpec CostSpec::put_plus_quadratic(double strike1, double strike2, double eps) {
  return american(CostComponent::put_of_x(strike1),
                  CostComponent::put_of_y_plus_quad(strike2, eps));
}

CostSpec CostSpec::quadratic_spread() {
  CostSpec spec;
  spec.kind = CostKind::generic;
  spec.components = {CostComponent::quadratic_spread()};
  return spec;
}

CostSpec CostSpec::constant(double value, int num_components) {
  if (num_components < 1) throw std::invalid_argument("constant: L must be >= 1");
  CostSpec spec;
  spec.kind = num_components == 2 ? CostKind::american : CostKind::generic;
  spec.components.assign(static_cast<size_t>(num_components),
                         CostComponent::constant(value));
  return spec;
}

CostSpec CostSpec::generic(std::vector<CostComponent> components) {
  if (components.empty()) throw std::invalid_argument("generic: L must be >= 1");
  CostSpec spec;
  spec.kind = CostKind::generic;
  spec.components = std::move(components);
  return spec;
}

double CostSpec::evaluate(int l, double x, double y) const {
  if (l < 1 || l > num_components())
    throw std::out_of_range("CostSpec::evaluate: component index out of range");
  return components[static_cast<size_t>(l - 1)].eval(x, y);
}

HypothesisReport check_theorem_hypotheses(const CostSpec& cost,
                                          const DiscreteMeasure& mu,
                                          const DiscreteMeasure& nu) {
  if (!cost.is_american())
    throw std::invalid_argument("check_theorem_hypotheses: american cost required");
  HypothesisReport rep;
  rep.nu_absolutely_continuous_origin = nu.meta().absolutely_continuous_origin;

  // Scale of c2 over the grid sets the strictness threshold.
  double c2_scale = 0.0;
  for (Index i = 0; i < mu.size(); ++i)
    for (Index j = 0; j < nu.size(); ++j)
      c2_scale = std::max(c2_scale, std::abs(cost.evaluate(2, mu.atom(i), nu.atom(j))));
  const double strict_tol = 1e-10 * (1.0 + c2_scale);

  // (a) strict convexity of y -> c2(x, y): slope increase over every triple
  // of consecutive nu atoms, at every mu atom.
  double min_second = std::numeric_limits<double>::infinity();
  bool strict = true;
  if (nu.size() < 3) {
    rep.note = "fewer than 3 nu atoms: convexity check is vacuous";
  } else {
    for (Index i = 0; i < mu.size(); ++i) {
      const double x = mu.atom(i);
      for (Index j = 0; j + 2 < nu.size(); ++j) {
        const double y1 = nu.atom(j), y2 = nu.atom(j + 1), y3 = nu.atom(j + 2);
        const double s1 = (cost.evaluate(2, x, y2) - cost.evaluate(2, x, y1)) / (y2 - y1);
        const double s2 = (cost.evaluate(2, x, y3) - cost.evaluate(2, x, y2)) / (y3 - y2);
        const double second = s2 - s1;
        min_second = std::min(min_second, second);
        if (second <= strict_tol) strict = false;
      }
    }
  }
  rep.strict_convexity = strict;
  rep.min_second_difference = std::isfinite(min_second) ? min_second : 0.0;

  // (b) diagonal separation c1(x) != c2(x, x) at every mu atom. Tabulated c2
  // may not carry the diagonal; report that instead of failing.
  double min_gap = std::numeric_limits<double>::infinity();
  int sign = 0;
  bool separated = true;
  bool evaluable = true;
  for (Index i = 0; i < mu.size(); ++i) {
    const double x = mu.atom(i);
    double c1, c2;
    try {
      c1 = cost.evaluate(1, x, x);
      c2 = cost.evaluate(2, x, x);
    } catch (const std::out_of_range&) {
      evaluable = false;
      break;
    }
    const double d = c1 - c2;
    min_gap = std::min(min_gap, std::abs(d));
    if (std::abs(d) <= strict_tol) {
      separated = false;
    } else {
      const int s = d > 0 ? 1 : -1;
      if (sign == 0)
        sign = s;
      else if (sign != s)
        sign = 2;  // mixed marker, squashed below
    }
  }
  if (!evaluable) {
    rep.diagonal_separated = false;
    rep.min_diagonal_gap = 0.0;
    rep.note = "tabulated c2 has no diagonal values; separation not evaluable";
  } else {
    rep.diagonal_separated = separated;
    rep.min_diagonal_gap = mu.size() > 0 ? min_gap : 0.0;
    rep.diagonal_sign = (sign == 2 || !separated) ? 0 : sign;
  }
  return rep;
}

}  // namespace mot
