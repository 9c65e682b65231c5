#include "pinn/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pointwise_ad.hpp"

namespace pinn {

std::string_view to_string(BarrierShape shape) { return shape == BarrierShape::inverse ? "inverse" : "log"; }

std::string_view to_string(BarrierBasis basis) {
  switch (basis) {
    case BarrierBasis::static_solution: return "static_solution";
    case BarrierBasis::static_operator: return "static_operator";
    case BarrierBasis::acceleration: return "acceleration";
  }
  return "unknown";
}

BarrierShape parse_barrier_shape(std::string_view name) {
  if (name == "inverse" || name == "inv" || name == "i") return BarrierShape::inverse;
  if (name == "log" || name == "l") return BarrierShape::log;
  throw InvalidArgument("unknown barrier shape '" + std::string(name) + "'");
}

BarrierBasis parse_barrier_basis(std::string_view name) {
  if (name == "static_solution" || name == "s") return BarrierBasis::static_solution;
  if (name == "static_operator" || name == "p") return BarrierBasis::static_operator;
  if (name == "acceleration" || name == "a") return BarrierBasis::acceleration;
  throw InvalidArgument("unknown barrier basis '" + std::string(name) + "'");
}

double barrier_value(BarrierShape shape, double margin, double depth) {
  const double gap = margin - depth;
  if (!(gap > kBufferTolerance)) throw InsideBufferError(margin, depth);
  return shape == BarrierShape::inverse ? 1.0 / gap : -std::log(gap);
}

double barrier_slope(BarrierShape shape, double margin, double depth) {
  const double gap = margin - depth;
  if (!(gap > kBufferTolerance)) throw InsideBufferError(margin, depth);
  return shape == BarrierShape::inverse ? -1.0 / (gap * gap) : -1.0 / gap;
}

double augment_loss(double J, const BarrierSpec& spec, double margin) {
  if (!spec.enabled()) return J;
  return J + spec.weight * barrier_value(spec.shape, margin, spec.depth);
}

namespace {

double acceleration_margin(const MarginDomain& dom, const JetBatch& jets, JetBatch* adjoint, double scale) {
  const FormId form = dom.problem->form;
  const int p_out = momentum_output(form);
  // Channel holding the acceleration of each displacement component.
  std::vector<std::pair<int, int>> channels;  // (output, component)
  if (p_out >= 0) {
    channels.emplace_back(p_out, static_cast<int>(JetComponent::dt));
    if (!is_bar(form)) channels.emplace_back(rod_out::pY, static_cast<int>(JetComponent::dt));
  } else {
    channels.emplace_back(0, static_cast<int>(JetComponent::dtt));
  }
  const std::size_t n = dom.end - dom.begin;
  double sum = 0.0;
  for (std::size_t p = dom.begin; p < dom.end; ++p) {
    for (auto [o, c] : channels) {
      const double a = jets.component(c)(o, static_cast<Eigen::Index>(p));
      sum += a * a;
    }
  }
  const double m = std::sqrt(sum / static_cast<double>(n));
  if (adjoint && m > 0.0) {
    const double coef = scale / (static_cast<double>(n) * m);
    for (std::size_t p = dom.begin; p < dom.end; ++p) {
      for (auto [o, c] : channels) {
        const auto j = static_cast<Eigen::Index>(p);
        adjoint->component(c)(o, j) += coef * jets.component(c)(o, j);
      }
    }
  }
  return m;
}

double static_solution_margin(const MarginDomain& dom, const JetBatch& jets, JetBatch* adjoint, double scale) {
  const auto& u_st = dom.problem->static_solution;
  if (!u_st) throw InvalidArgument("problem has no known static solution");
  const std::size_t n = dom.end - dom.begin;
  std::vector<double> diff(n);
  double sum = 0.0;
  for (std::size_t p = dom.begin; p < dom.end; ++p) {
    const double d = jets.component(0)(0, static_cast<Eigen::Index>(p)) - u_st(dom.points[p].x);
    diff[p - dom.begin] = d;
    sum += d * d;
  }
  const double m = std::sqrt(sum / static_cast<double>(n));
  if (adjoint && m > 0.0) {
    const double coef = scale / (static_cast<double>(n) * m);
    for (std::size_t p = dom.begin; p < dom.end; ++p) {
      adjoint->component(0)(0, static_cast<Eigen::Index>(p)) += coef * diff[p - dom.begin];
    }
  }
  return m;
}

double static_operator_margin(const MarginDomain& dom, const JetBatch& jets, JetBatch* adjoint, double scale) {
  const ProblemForm& pb = *dom.problem;
  const std::size_t n = dom.end - dom.begin;
  const int n_res = pb.n_residuals();
  return detail::with_slots(pb.form, [&](auto slots) {
    constexpr int N = decltype(slots)::value;
    using D = ad::Dual<N>;
    std::vector<std::vector<D>> res(n, std::vector<D>(static_cast<std::size_t>(n_res)));
    double sum = 0.0;
    for (std::size_t p = dom.begin; p < dom.end; ++p) {
      const auto j = detail::seed_point<N>(jets, p);
      const Point& pt = dom.points[p];
      auto& r = res[p - dom.begin];
      evaluate_residuals<D>(pb.form, j, pb.slenderness, pb.fX(pt.x, pt.t), pb.fY(pt.x, pt.t), false, r, p);
      for (const auto& ri : r) sum += ri.v * ri.v;
    }
    const double m = std::sqrt(sum / static_cast<double>(n));
    if (adjoint && m > 0.0) {
      const double coef = scale / (static_cast<double>(n) * m);
      for (std::size_t p = dom.begin; p < dom.end; ++p) {
        for (const auto& ri : res[p - dom.begin]) detail::scatter<N>(*adjoint, p, ri, coef * ri.v);
      }
    }
    return m;
  });
}

}  // namespace

double margin(BarrierBasis basis, const MarginDomain& domain, const JetBatch& jets, JetBatch* adjoint,
              double scale) {
  if (!domain.problem) throw InvalidArgument("margin needs a problem");
  if (domain.end <= domain.begin || domain.end > jets.n_points()) throw InvalidArgument("empty margin domain");
  switch (basis) {
    case BarrierBasis::acceleration: return acceleration_margin(domain, jets, adjoint, scale);
    case BarrierBasis::static_solution: return static_solution_margin(domain, jets, adjoint, scale);
    case BarrierBasis::static_operator: return static_operator_margin(domain, jets, adjoint, scale);
  }
  return 0.0;
}

StaticDetection detect_static(const TimeSeries& series) {
  StaticDetection out;
  if (series.size() < 3) return out;
  const auto& t = series.times();
  const auto& v = series.values();
  const double range = series.peak_to_peak();
  if (!(range > 0.0)) return out;
  const double change = v.back() - v.front();
  if (change == 0.0) return out;
  const double dir = change > 0.0 ? 1.0 : -1.0;
  const double target = 0.9 * std::abs(change);

  std::size_t onset = v.size() - 1;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if ((v[i] - v.front()) * dir >= target) {
      onset = i;
      break;
    }
  }
  const std::size_t m = v.size() - onset;
  double mean = 0.0;
  for (std::size_t i = onset; i < v.size(); ++i) mean += v[i];
  mean /= static_cast<double>(m);
  double var = 0.0;
  for (std::size_t i = onset; i < v.size(); ++i) var += (v[i] - mean) * (v[i] - mean);
  const double sd = std::sqrt(var / static_cast<double>(m));

  out.onset_time = t[onset];
  const double span = t.back() - t.front();
  out.is_static = sd < 0.02 * range && (t[onset] - t.front()) < 0.3 * span;
  return out;
}

}  // namespace pinn
