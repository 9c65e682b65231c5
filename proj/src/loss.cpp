#include "pinn/loss.hpp"

#include <cmath>

#include "pointwise_ad.hpp"

namespace pinn {

PinnLoss::PinnLoss(ProblemForm problem, const Grid& grid) : problem_(std::move(problem)) {
  if (grid.interior.empty()) throw InvalidArgument("grid has no interior points");
  if (static_cast<int>(problem_.residual_weights.size()) != problem_.n_residuals())
    throw InvalidArgument("one residual weight per residual equation is required");
  n_interior_ = grid.interior.size();
  points_.reserve(grid.size());
  auto append = [&](const std::vector<Point>& pts) {
    Range r{points_.size(), points_.size() + pts.size()};
    points_.insert(points_.end(), pts.begin(), pts.end());
    return r;
  };
  append(grid.interior);
  left_ = append(grid.left);
  right_ = append(grid.right);
  initial_ = append(grid.initial);

  fx_.resize(n_interior_);
  fy_.resize(n_interior_);
  for (std::size_t p = 0; p < n_interior_; ++p) {
    fx_[p] = problem_.fX(points_[p].x, points_[p].t);
    fy_[p] = problem_.fY(points_[p].x, points_[p].t);
  }

  names_ = residual_names(problem_.form);
  for (const auto& c : problem_.constraints) {
    const Range r = line_range(c.location);
    if (r.end == r.begin) throw InvalidArgument("constraint '" + c.name + "' has no points on its line");
    names_.push_back(c.name);
  }
}

PinnLoss::Range PinnLoss::line_range(Location loc) const {
  switch (loc) {
    case Location::x0: return left_;
    case Location::x1: return right_;
    case Location::t0: return initial_;
  }
  return {};
}

LossTerms PinnLoss::evaluate(const JetBatch& jets, JetBatch* adjoint, const BarrierSpec* barrier) const {
  if (jets.n_points() != points_.size() || jets.n_outputs() != problem_.n_out())
    throw InvalidArgument("jet batch does not match the loss points");
  const int n_res = problem_.n_residuals();
  const double s = problem_.slenderness;

  LossTerms terms;
  terms.groups.assign(names_.size(), 0.0);

  detail::with_slots(problem_.form, [&](auto slots) {
    constexpr int N = decltype(slots)::value;
    using D = ad::Dual<N>;
    const double inv_n = 1.0 / static_cast<double>(n_interior_);
    std::vector<D> r(static_cast<std::size_t>(n_res));
    for (std::size_t p = 0; p < n_interior_; ++p) {
      const auto j = detail::seed_point<N>(jets, p);
      evaluate_residuals<D>(problem_.form, j, s, fx_[p], fy_[p], true, r, p);
      for (int i = 0; i < n_res; ++i) {
        const double v = r[i].v;
        terms.groups[i] += v * v * inv_n;
        if (adjoint) detail::scatter<N>(*adjoint, p, r[i], 2.0 * problem_.residual_weights[i] * v * inv_n);
      }
    }
    for (std::size_t g = 0; g < problem_.constraints.size(); ++g) {
      const Constraint& c = problem_.constraints[g];
      const Range range = line_range(c.location);
      const double inv_m = 1.0 / static_cast<double>(range.end - range.begin);
      double& group = terms.groups[static_cast<std::size_t>(n_res) + g];
      for (std::size_t p = range.begin; p < range.end; ++p) {
        const auto j = detail::seed_point<N>(jets, p);
        const D e = evaluate_constraint<D>(c, std::span<const JetT<D>>(j), s);
        group += e.v * e.v * inv_m;
        if (adjoint) detail::scatter<N>(*adjoint, p, e, 2.0 * c.weight * e.v * inv_m);
      }
    }
  });

  for (int i = 0; i < n_res; ++i) terms.pinn += problem_.residual_weights[i] * terms.groups[i];
  for (std::size_t g = 0; g < problem_.constraints.size(); ++g)
    terms.pinn += problem_.constraints[g].weight * terms.groups[static_cast<std::size_t>(n_res) + g];

  if (barrier && barrier->enabled()) {
    const MarginDomain dom{&problem_, points_, 0, n_interior_};
    terms.margin = margin(barrier->basis, dom, jets);
    double slope;
    if (terms.margin - barrier->depth > kBufferTolerance) {
      terms.barrier = barrier->weight * barrier_value(barrier->shape, terms.margin, barrier->depth);
      slope = barrier->weight * barrier_slope(barrier->shape, terms.margin, barrier->depth);
    } else {
      terms.inside_buffer = true;
      terms.barrier = barrier->weight * kInsideBufferPenalty * (1.0 + barrier->depth - terms.margin);
      slope = -barrier->weight * kInsideBufferPenalty;
    }
    if (adjoint) margin(barrier->basis, dom, jets, adjoint, slope);
  }
  terms.total = terms.pinn + terms.barrier;
  return terms;
}

}  // namespace pinn
