#include "pinn/problems.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace pinn {

NondimScales nondimensionalize(double E, double I, double A, double rho, double L) {
  for (double v : {E, I, A, rho, L}) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument("material and geometric inputs must be positive");
  }
  NondimScales s;
  s.slenderness = A * L * L / I;
  s.rotundness = I / (A * L * L);
  s.time_scale = L * L * std::sqrt(rho * A / (E * I));
  s.force_scale = L * L / (E * I);
  s.moment_scale = L / (E * I);
  s.dist_force_scale = L * L * L / (E * I);
  return s;
}

std::string_view to_string(FormId form) {
  switch (form) {
    case FormId::bar_f1: return "Bar.F1";
    case FormId::bar_f2a: return "Bar.F2a";
    case FormId::bar_f2b: return "Bar.F2b";
    case FormId::bar_f3: return "Bar.F3";
    case FormId::rod_f3: return "Rod.F3";
    case FormId::rod_f4: return "Rod.F4";
  }
  return "unknown";
}

FormId parse_form_id(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  for (FormId f : {FormId::bar_f1, FormId::bar_f2a, FormId::bar_f2b, FormId::bar_f3, FormId::rod_f3,
                   FormId::rod_f4}) {
    std::string candidate(to_string(f));
    std::transform(candidate.begin(), candidate.end(), candidate.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (candidate == lower) return f;
  }
  throw InvalidArgument("unknown form '" + std::string(name) + "'");
}

bool is_bar(FormId form) {
  return form == FormId::bar_f1 || form == FormId::bar_f2a || form == FormId::bar_f2b || form == FormId::bar_f3;
}

int output_count(FormId form) {
  switch (form) {
    case FormId::bar_f1: return 1;
    case FormId::bar_f2a: return 2;
    case FormId::bar_f2b: return 2;
    case FormId::bar_f3: return 3;
    case FormId::rod_f3: return 9;
    case FormId::rod_f4: return 11;
  }
  return 0;
}

int residual_count(FormId form) { return output_count(form); }

std::vector<std::string> output_names(FormId form) {
  switch (form) {
    case FormId::bar_f1: return {"u"};
    case FormId::bar_f2a: return {"u", "pX"};
    case FormId::bar_f2b: return {"u", "zeta_u"};
    case FormId::bar_f3: return {"u", "zeta_u", "pX"};
    case FormId::rod_f3: return {"u", "v", "alpha", "c", "M", "pX", "pY", "zeta_u", "zeta_v"};
    case FormId::rod_f4: return {"u", "v", "alpha", "k", "M", "pX", "pY", "NX", "NY", "SX", "SY"};
  }
  return {};
}

std::vector<std::string> residual_names(FormId form) {
  switch (form) {
    case FormId::bar_f1: return {"momentum"};
    case FormId::bar_f2a: return {"momentum", "velocity"};
    case FormId::bar_f2b: return {"momentum", "strain"};
    case FormId::bar_f3: return {"momentum", "strain", "velocity"};
    case FormId::rod_f3:
      return {"momentum_x", "momentum_y", "strain_u", "velocity_u", "curvature",
              "strain_v", "velocity_v", "extension", "slope"};
    case FormId::rod_f4:
      return {"momentum_x", "momentum_y", "normal_x", "shear_x", "normal_y", "shear_y",
              "curvature", "velocity_u", "velocity_v", "inv_extension", "slope"};
  }
  return {};
}

int momentum_output(FormId form) {
  switch (form) {
    case FormId::bar_f2a: return 1;
    case FormId::bar_f3: return 2;
    case FormId::rod_f3:
    case FormId::rod_f4: return rod_out::pX;
    default: return -1;
  }
}

std::vector<JetT<double>> to_jet_t(std::span<const Jet2> jets) {
  std::vector<JetT<double>> out;
  out.reserve(jets.size());
  for (const auto& j : jets) out.push_back(to_jet_t(j));
  return out;
}

namespace {

std::vector<double> residuals_impl(FormId form, std::span<const Jet2> jets, double s, double fX, double fY,
                                   bool inertia) {
  if (static_cast<int>(jets.size()) != output_count(form)) {
    throw InvalidArgument("expected " + std::to_string(output_count(form)) + " jets for " +
                          std::string(to_string(form)));
  }
  const auto j = to_jet_t(jets);
  std::vector<double> out(static_cast<std::size_t>(residual_count(form)));
  evaluate_residuals<double>(form, j, s, fX, fY, inertia, out);
  return out;
}

}  // namespace

std::vector<double> residuals(FormId form, std::span<const Jet2> jets, double s, double fX, double fY) {
  return residuals_impl(form, jets, s, fX, fY, true);
}

std::vector<double> static_operator(FormId form, std::span<const Jet2> jets, double s, double fX, double fY) {
  return residuals_impl(form, jets, s, fX, fY, false);
}

Constraint Constraint::dirichlet(std::string name, Location loc, int output, double value) {
  Constraint c;
  c.name = std::move(name);
  c.location = loc;
  c.kind = ConstraintKind::dirichlet;
  c.output = output;
  c.prescribed = value;
  return c;
}

Constraint Constraint::derivative(std::string name, Location loc, int output, Direction dir, double value) {
  Constraint c;
  c.name = std::move(name);
  c.location = loc;
  c.kind = ConstraintKind::input_derivative;
  c.output = output;
  c.direction = dir;
  c.prescribed = value;
  return c;
}

Constraint Constraint::algebraic(std::string name, Location loc, AedKind kind, double value) {
  Constraint c;
  c.name = std::move(name);
  c.location = loc;
  c.kind = ConstraintKind::aed;
  c.aed = kind;
  c.prescribed = value;
  return c;
}

double evaluate_constraint(const Constraint& c, std::span<const Jet2> jets, double s) {
  const auto j = to_jet_t(jets);
  if (c.kind == ConstraintKind::aed) {
    if (static_cast<int>(j.size()) <= rod_out::M) throw InvalidArgument("AED constraints need the rod output layout");
  } else if (c.output < 0 || c.output >= static_cast<int>(j.size())) {
    throw InvalidArgument("constraint output index out of range");
  }
  return evaluate_constraint<double>(c, std::span<const JetT<double>>(j), s);
}

LoadFn constant_load(double value) {
  return [value](double, double) { return value; };
}

namespace {

std::vector<Constraint> bar_constraints(std::string_view preset, FormId form) {
  using C = Constraint;
  std::vector<Constraint> cs;
  cs.push_back(C::dirichlet("bc_u_x0", Location::x0, bar_out::u));
  if (preset == "bar-pinned-pinned") {
    cs.push_back(C::dirichlet("bc_u_x1", Location::x1, bar_out::u));
  } else if (form == FormId::bar_f1 || form == FormId::bar_f2a) {
    cs.push_back(C::derivative("bc_N_x1", Location::x1, bar_out::u, Direction::x));
  } else {
    cs.push_back(C::dirichlet("bc_N_x1", Location::x1, 1));  // zeta_u
  }
  cs.push_back(C::dirichlet("ic_u", Location::t0, bar_out::u));
  if (const int p = momentum_output(form); p >= 0) {
    cs.push_back(C::dirichlet("ic_p", Location::t0, p));
  } else {
    cs.push_back(C::derivative("ic_ut", Location::t0, bar_out::u, Direction::t));
  }
  return cs;
}

std::vector<Constraint> rod_constraints(std::string_view preset) {
  using C = Constraint;
  std::vector<Constraint> cs;
  if (preset == "rod-cantilever") {
    cs.push_back(C::dirichlet("bc_u_x0", Location::x0, rod_out::u));
    cs.push_back(C::dirichlet("bc_v_x0", Location::x0, rod_out::v));
    cs.push_back(C::dirichlet("bc_alpha_x0", Location::x0, rod_out::alpha));
    cs.push_back(C::algebraic("bc_N_x1", Location::x1, AedKind::axial_force));
    cs.push_back(C::algebraic("bc_S_x1", Location::x1, AedKind::shear_force));
    cs.push_back(C::derivative("bc_M_x1", Location::x1, rod_out::alpha, Direction::x));
  } else {
    cs.push_back(C::dirichlet("bc_u_x0", Location::x0, rod_out::u));
    cs.push_back(C::dirichlet("bc_v_x0", Location::x0, rod_out::v));
    cs.push_back(C::derivative("bc_M_x0", Location::x0, rod_out::alpha, Direction::x));
    cs.push_back(C::algebraic("bc_N_x1", Location::x1, AedKind::axial_force));
    cs.push_back(C::dirichlet("bc_v_x1", Location::x1, rod_out::v));
    cs.push_back(C::derivative("bc_M_x1", Location::x1, rod_out::alpha, Direction::x));
  }
  cs.push_back(C::dirichlet("ic_u", Location::t0, rod_out::u));
  cs.push_back(C::dirichlet("ic_v", Location::t0, rod_out::v));
  cs.push_back(C::dirichlet("ic_pX", Location::t0, rod_out::pX));
  cs.push_back(C::dirichlet("ic_pY", Location::t0, rod_out::pY));
  return cs;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"bar-pinned-pinned", "bar-pinned-free", "rod-cantilever", "rod-simply-supported"};
}

ProblemForm make_problem(std::string_view preset, FormId form, const PresetOptions& opts) {
  const bool bar_preset = preset == "bar-pinned-pinned" || preset == "bar-pinned-free";
  const bool rod_preset = preset == "rod-cantilever" || preset == "rod-simply-supported";
  if (!bar_preset && !rod_preset) throw UnknownPresetError(std::string(preset));
  if (bar_preset != is_bar(form)) {
    throw InvalidArgument(std::string(to_string(form)) + " does not apply to preset " + std::string(preset));
  }
  if (!(opts.slenderness > 0.0)) throw InvalidArgument("slenderness must be positive");

  ProblemForm p;
  p.preset = std::string(preset);
  p.form = form;
  p.slenderness = opts.slenderness;
  p.fX = constant_load(opts.fX);
  p.fY = constant_load(opts.fY);
  p.residual_weights.assign(static_cast<std::size_t>(residual_count(form)), 1.0);

  if (bar_preset) {
    p.constraints = bar_constraints(preset, form);
    const double amp = opts.fX / (2.0 * opts.slenderness);
    if (preset == "bar-pinned-pinned") {
      p.final_time = 4.0;
      p.static_solution = [amp](double x) { return amp * x * (1.0 - x); };
    } else {
      p.final_time = 8.0;
      p.static_solution = [amp](double x) { return amp * x * (2.0 - x); };
    }
  } else {
    p.constraints = rod_constraints(preset);
    p.final_time = 4.0;
  }
  if (opts.final_time) {
    if (!(*opts.final_time > 0.0)) throw InvalidArgument("final time must be positive");
    p.final_time = *opts.final_time;
  }
  return p;
}

double assemble_loss(std::span<const std::vector<double>> groups, std::span<const double> weights) {
  if (groups.size() != weights.size()) throw InvalidArgument("one weight per residual group is required");
  double total = 0.0;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (groups[i].empty()) throw InvalidArgument("residual group " + std::to_string(i) + " is empty");
    double sum = 0.0;
    for (double r : groups[i]) sum += r * r;
    total += weights[i] * sum / static_cast<double>(groups[i].size());
  }
  return total;
}

}  // namespace pinn
