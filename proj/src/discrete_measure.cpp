#include "mot/discrete_measure.hpp"

#include <algorithm>
#include <cmath>

namespace mot {

namespace {

std::string format_point(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(VectorXd atoms, VectorXd weights, MeasureMeta meta)
    : meta_(meta) {
  if (atoms.size() != weights.size())
    throw std::invalid_argument("DiscreteMeasure: atoms/weights length mismatch");
  const Index n = atoms.size();
  std::vector<Index> order(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
  std::sort(order.begin(), order.end(),
            [&](Index a, Index b) { return atoms(a) < atoms(b); });

  std::vector<double> xs, ws;
  xs.reserve(static_cast<size_t>(n));
  ws.reserve(static_cast<size_t>(n));
  for (Index idx = 0; idx < n; ++idx) {
    const Index i = order[static_cast<size_t>(idx)];
    double x = atoms(i);
    double w = weights(i);
    if (!std::isfinite(x) || !std::isfinite(w))
      throw std::invalid_argument("DiscreteMeasure: non-finite atom or weight");
    if (w < 0.0) {
      if (w < -kAtomMergeTol)
        throw std::invalid_argument("DiscreteMeasure: negative weight " +
                                    format_point(w) + " at atom " + format_point(x));
      w = 0.0;
    }
    if (!xs.empty() && x - xs.back() < kAtomMergeTol) {
      ws.back() += w;
    } else {
      xs.push_back(x);
      ws.push_back(w);
    }
  }
  // Drop zero-weight atoms.
  Index kept = 0;
  for (size_t i = 0; i < xs.size(); ++i)
    if (ws[i] > 0.0) ++kept;
  atoms_.resize(kept);
  weights_.resize(kept);
  Index j = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (ws[i] > 0.0) {
      atoms_(j) = xs[i];
      weights_(j) = ws[i];
      ++j;
    }
  }
}

DiscreteMeasure DiscreteMeasure::dirac(double atom, double weight) {
  VectorXd a(1), w(1);
  a << atom;
  w << weight;
  return DiscreteMeasure(std::move(a), std::move(w));
}

DiscreteMeasure DiscreteMeasure::from_pairs(std::vector<std::pair<double, double>> xw,
                                            MeasureMeta meta) {
  VectorXd a(static_cast<Index>(xw.size())), w(static_cast<Index>(xw.size()));
  for (size_t i = 0; i < xw.size(); ++i) {
    a(static_cast<Index>(i)) = xw[i].first;
    w(static_cast<Index>(i)) = xw[i].second;
  }
  return DiscreteMeasure(std::move(a), std::move(w), meta);
}

double DiscreteMeasure::mean() const {
  const double m = mass();
  return m > 0.0 ? first_moment() / m : 0.0;
}

bool DiscreteMeasure::is_probability(double tol) const {
  return std::abs(mass() - 1.0) <= tol;
}

DiscreteMeasure DiscreteMeasure::normalized() const {
  const double m = mass();
  if (m <= 0.0) throw std::invalid_argument("normalized: zero-mass measure");
  return DiscreteMeasure(atoms_, weights_ / m, meta_);
}

DiscreteMeasure DiscreteMeasure::scaled(double factor) const {
  if (factor < 0.0) throw std::invalid_argument("scaled: negative factor");
  return DiscreteMeasure(atoms_, weights_ * factor, meta_);
}

DiscreteMeasure DiscreteMeasure::shifted(double delta) const {
  MeasureMeta meta = meta_;
  meta.mean_shift += delta;
  return DiscreteMeasure(atoms_.array() + delta, weights_, meta);
}

DiscreteMeasure DiscreteMeasure::restricted_to_open(double lo, double hi) const {
  std::vector<std::pair<double, double>> xw;
  for (Index i = 0; i < size(); ++i)
    if (atoms_(i) > lo && atoms_(i) < hi) xw.emplace_back(atoms_(i), weights_(i));
  return DiscreteMeasure::from_pairs(std::move(xw), meta_);
}

double DiscreteMeasure::weight_at(double x) const {
  for (Index i = 0; i < size(); ++i) {
    if (std::abs(atoms_(i) - x) < kAtomMergeTol) return weights_(i);
    if (atoms_(i) > x + kAtomMergeTol) break;
  }
  return 0.0;
}

double potential(const DiscreteMeasure& xi, double x) {
  if (xi.empty()) return 0.0;
  return (xi.atoms().array() - x).abs().matrix().dot(xi.weights());
}

VectorXd potential(const DiscreteMeasure& xi, const VectorXd& xs) {
  VectorXd out(xs.size());
  for (Index i = 0; i < xs.size(); ++i) out(i) = potential(xi, xs(i));
  return out;
}

namespace {

// Sorted union of both atom sets, merged within kAtomMergeTol.
VectorXd atom_union(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  std::vector<double> pts;
  pts.reserve(static_cast<size_t>(a.size() + b.size()));
  Index i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    double x;
    if (j >= b.size() || (i < a.size() && a.atom(i) <= b.atom(j)))
      x = a.atom(i++);
    else
      x = b.atom(j++);
    if (pts.empty() || x - pts.back() >= kAtomMergeTol) pts.push_back(x);
  }
  return Eigen::Map<VectorXd>(pts.data(), static_cast<Index>(pts.size()));
}

}  // namespace

ConvexOrderResult check_convex_order(const DiscreteMeasure& mu,
                                     const DiscreteMeasure& nu, double tol) {
  ConvexOrderResult res;
  const double dmass = nu.mass() - mu.mass();
  if (std::abs(dmass) > tol) {
    res.failure = ConvexOrderResult::Failure::mass_mismatch;
    res.witness = dmass;
    res.reason = "mass mismatch: nu - mu = " + format_point(dmass);
    return res;
  }
  const double dmean = nu.first_moment() - mu.first_moment();
  if (std::abs(dmean) > tol) {
    res.failure = ConvexOrderResult::Failure::mean_mismatch;
    res.witness = dmean;
    res.reason = "mean mismatch: nu - mu first moment = " + format_point(dmean);
    return res;
  }
  const VectorXd pts = atom_union(mu, nu);
  for (Index k = 0; k < pts.size(); ++k) {
    const double gap = potential(mu, pts(k)) - potential(nu, pts(k));
    if (gap > tol) {
      res.failure = ConvexOrderResult::Failure::potential;
      res.witness = pts(k);
      res.reason = "potential inequality fails at x = " + format_point(pts(k)) +
                   " (u_mu - u_nu = " + format_point(gap) + ")";
      return res;
    }
  }
  res.ordered = true;
  return res;
}

DiscreteMeasure common_mass(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  std::vector<std::pair<double, double>> xw;
  Index i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double xa = a.atom(i), xb = b.atom(j);
    if (std::abs(xa - xb) < kAtomMergeTol) {
      xw.emplace_back(xa, std::min(a.weight(i), b.weight(j)));
      ++i;
      ++j;
    } else if (xa < xb) {
      ++i;
    } else {
      ++j;
    }
  }
  return DiscreteMeasure::from_pairs(std::move(xw));
}

std::vector<IrreducibleComponent> irreducible_decomposition(
    const DiscreteMeasure& mu, const DiscreteMeasure& nu, double tol) {
  const auto order = check_convex_order(mu, nu, tol);
  if (!order)
    throw NotInConvexOrder("irreducible_decomposition: " + order.reason);

  const VectorXd pts = atom_union(mu, nu);
  const Index np = pts.size();
  VectorXd diff(np);
  for (Index k = 0; k < np; ++k)
    diff(k) = potential(nu, pts(k)) - potential(mu, pts(k));

  // Maximal runs of test points with diff > tol. The difference is piecewise
  // linear with kinks only at test points and is >= 0 by convex order, so
  // every boundary of {u_mu < u_nu} is itself a test point: an interior
  // crossing of a nonnegative linear segment would force the segment to
  // vanish identically.
  struct Block {
    Index first, last;  // inclusive run of strictly-positive test points
    double lo, hi;      // open interval endpoints
  };
  std::vector<Block> blocks;
  Index k = 0;
  while (k < np) {
    if (diff(k) > tol) {
      Index first = k;
      while (k + 1 < np && diff(k + 1) > tol) ++k;
      Block b;
      b.first = first;
      b.last = k;
      b.lo = first > 0 ? pts(first - 1) : pts(first) - 1.0;
      b.hi = k + 1 < np ? pts(k + 1) : pts(k) + 1.0;
      blocks.push_back(b);
    }
    ++k;
  }

  // nu mass still available at every test point; components consume it.
  VectorXd nu_avail(np);
  for (Index p = 0; p < np; ++p) nu_avail(p) = nu.weight_at(pts(p));

  std::vector<IrreducibleComponent> intervals;
  int next_k = 1;
  for (const Block& b : blocks) {
    IrreducibleComponent comp;
    comp.k = next_k++;
    comp.interval = std::make_pair(b.lo, b.hi);
    comp.mu_part = mu.restricted_to_open(b.lo, b.hi);

    // Interior nu atoms belong to the component outright; endpoint atoms are
    // split so that the component matches mu_part in mass and first moment.
    std::vector<std::pair<double, double>> nu_xw;
    double interior_mass = 0.0, interior_moment = 0.0;
    for (Index p = b.first; p <= b.last; ++p) {
      const double w = nu.weight_at(pts(p));
      if (w > 0.0) {
        nu_xw.emplace_back(pts(p), w);
        interior_mass += w;
        interior_moment += w * pts(p);
        nu_avail(p) = 0.0;
      }
    }
    const double need_mass = comp.mu_part.mass() - interior_mass;
    const double need_moment = comp.mu_part.first_moment() - interior_moment;
    // alpha at lo, beta at hi with alpha + beta = need_mass and
    // alpha*lo + beta*hi = need_moment.
    const double width = b.hi - b.lo;
    double beta = width > 0.0 ? (need_moment - need_mass * b.lo) / width : 0.0;
    double alpha = need_mass - beta;
    const double slack = tol * (1.0 + comp.mu_part.mass());
    const Index lo_idx = b.first > 0 ? b.first - 1 : -1;
    const Index hi_idx = b.last + 1 < np ? b.last + 1 : -1;
    auto take = [&](Index p, double amount, const char* side) {
      if (amount <= slack) return;
      if (p < 0 || amount > nu_avail(p) + slack)
        throw std::runtime_error(
            std::string("irreducible_decomposition: inconsistent ") + side +
            " endpoint mass near x = " + format_point(p >= 0 ? pts(p) : 0.0));
      const double taken = std::min(amount, nu_avail(p));
      nu_avail(p) -= taken;
      nu_xw.emplace_back(pts(p), taken);
    };
    take(lo_idx, alpha, "left");
    take(hi_idx, beta, "right");
    comp.nu_part = DiscreteMeasure::from_pairs(std::move(nu_xw));
    intervals.push_back(std::move(comp));
  }

  // Component 0: mu outside every interval; nu keeps whatever the intervals
  // did not consume. The two must agree atom by atom.
  std::vector<std::pair<double, double>> mu0_xw, nu0_xw;
  for (Index i = 0; i < mu.size(); ++i) {
    const double x = mu.atom(i);
    bool inside = false;
    for (const Block& b : blocks)
      if (x > b.lo && x < b.hi) {
        inside = true;
        break;
      }
    if (!inside) mu0_xw.emplace_back(x, mu.weight(i));
  }
  for (Index p = 0; p < np; ++p)
    if (nu_avail(p) > tol) nu0_xw.emplace_back(pts(p), nu_avail(p));

  std::vector<IrreducibleComponent> out;
  DiscreteMeasure mu0 = DiscreteMeasure::from_pairs(std::move(mu0_xw));
  DiscreteMeasure nu0 = DiscreteMeasure::from_pairs(std::move(nu0_xw));
  if (mu0.mass() > tol || nu0.mass() > tol) {
    if (mu0.size() != nu0.size())
      throw std::runtime_error(
          "irreducible_decomposition: identity component mismatch");
    for (Index i = 0; i < mu0.size(); ++i)
      if (std::abs(mu0.atom(i) - nu0.atom(i)) > kAtomMergeTol ||
          std::abs(mu0.weight(i) - nu0.weight(i)) > tol * (1.0 + mu0.mass()))
        throw std::runtime_error(
            "irreducible_decomposition: identity component mismatch at x = " +
            format_point(mu0.atom(i)));
    IrreducibleComponent comp0;
    comp0.k = 0;
    comp0.mu_part = std::move(mu0);
    comp0.nu_part = std::move(nu0);
    out.push_back(std::move(comp0));
  }
  for (auto& c : intervals) out.push_back(std::move(c));
  return out;
}

}  // namespace mot
