#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pinn/dual.hpp"
#include "pinn/errors.hpp"
#include "pinn/jets.hpp"

namespace pinn {

// ---------------------------------------------------------------------------
// Non-dimensionalization

struct NondimScales {
  double slenderness = 1.0;       // s = A L^2 / I
  double rotundness = 1.0;        // r = 1 / s
  double time_scale = 1.0;        // t* = L^2 sqrt(rho A / (E I)), seconds
  double force_scale = 1.0;       // L^2 / (E I)
  double moment_scale = 1.0;      // L / (E I)
  double dist_force_scale = 1.0;  // L^3 / (E I)
};

/// Throws InvalidArgument unless every input is positive and finite.
NondimScales nondimensionalize(double E, double I, double A, double rho, double L);

// ---------------------------------------------------------------------------
// Forms

enum class FormId { bar_f1, bar_f2a, bar_f2b, bar_f3, rod_f3, rod_f4 };

std::string_view to_string(FormId form);
/// Accepts "Bar.F1", "Bar.F2a", ..., "Rod.F4" (case-insensitive).
FormId parse_form_id(std::string_view name);
bool is_bar(FormId form);
int output_count(FormId form);
int residual_count(FormId form);
std::vector<std::string> output_names(FormId form);
std::vector<std::string> residual_names(FormId form);

// Output layouts.
namespace bar_out {
inline constexpr int u = 0;
// Bar.F2a: (u, pX); Bar.F2b: (u, zeta_u); Bar.F3: (u, zeta_u, pX).
}  // namespace bar_out

namespace rod_out {
inline constexpr int u = 0;
inline constexpr int v = 1;
inline constexpr int alpha = 2;
inline constexpr int ext = 3;  // Rod.F3: 1 + e ; Rod.F4: 1 / (1 + e)
inline constexpr int M = 4;
inline constexpr int pX = 5;
inline constexpr int pY = 6;
// Rod.F3
inline constexpr int zeta_u = 7;
inline constexpr int zeta_v = 8;
// Rod.F4
inline constexpr int NX = 7;
inline constexpr int NY = 8;
inline constexpr int SX = 9;
inline constexpr int SY = 10;
}  // namespace rod_out

/// Output index of the axial momentum, or -1 when the Form does not split time.
int momentum_output(FormId form);

template <class T>
struct JetT {
  T v{};
  T dx{};
  T dt{};
  T dxx{};
  T dtt{};
};

inline JetT<double> to_jet_t(const Jet2& j) { return {j.v, j.dx, j.dt, j.dxx, j.dtt}; }
std::vector<JetT<double>> to_jet_t(std::span<const Jet2> jets);

// ---------------------------------------------------------------------------
// Pointwise residuals. `inertia = false` drops the momentum-rate terms, which
// turns the dynamic operator into its static counterpart.

template <class T>
T residual_bar_f1(std::span<const JetT<T>> j, double s, double fX, bool inertia = true) {
  T r = s * j[0].dxx + fX;
  if (inertia) r -= j[0].dtt;
  return r;
}

template <class T>
std::array<T, 2> residual_bar_f2a(std::span<const JetT<T>> j, double s, double fX, bool inertia = true) {
  const auto& u = j[0];
  const auto& p = j[1];
  T r1 = s * u.dxx + fX;
  if (inertia) r1 -= p.dt;
  return {r1, u.dt - p.v};
}

template <class T>
std::array<T, 2> residual_bar_f2b(std::span<const JetT<T>> j, double s, double fX, bool inertia = true) {
  const auto& u = j[0];
  const auto& z = j[1];
  T r1 = s * z.dx + fX;
  if (inertia) r1 -= u.dtt;
  return {r1, u.dx - z.v};
}

template <class T>
std::array<T, 3> residual_bar_f3(std::span<const JetT<T>> j, double s, double fX, bool inertia = true) {
  const auto& u = j[0];
  const auto& z = j[1];
  const auto& p = j[2];
  T r1 = s * z.dx + fX;
  if (inertia) r1 -= p.dt;
  return {r1, u.dx - z.v, u.dt - p.v};
}

inline constexpr double kMinExtension = 1e-8;

/// Kirchhoff rod, first-order split in space and time. Shear is derived as
/// S = -M_x / c, so its space derivative reads M_xx. Throws
/// NearSingularExtensionError(point_index) when |c| < 1e-8.
template <class T>
std::array<T, 9> residual_rod_f3(std::span<const JetT<T>> j, double s, double fX, double fY, bool inertia = true,
                                 std::size_t point_index = 0) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  const auto& u = j[0];
  const auto& v = j[1];
  const auto& a = j[2];
  const auto& c = j[3];
  const auto& M = j[4];
  const auto& pX = j[5];
  const auto& pY = j[6];
  const auto& zu = j[7];
  const auto& zv = j[8];
  if (!(std::abs(ad::value_of(c.v)) >= kMinExtension)) throw NearSingularExtensionError(point_index);

  const T sa = sin(a.v);
  const T ca = cos(a.v);
  const T S = -M.dx / c.v;
  const T S_x = -M.dxx / c.v + M.dx * c.dx / (c.v * c.v);

  T r1 = s * (zu.dx + a.dx * sa) - S_x * sa - S * a.dx * ca + fX;
  T r2 = s * (zv.dx - a.dx * ca) + S_x * ca - S * a.dx * sa + fY;
  if (inertia) {
    r1 -= pX.dt;
    r2 -= pY.dt;
  }
  const T one_u = 1.0 + u.dx;
  return {r1,
          r2,
          u.dx - zu.v,
          u.dt - pX.v,
          a.dx - M.v,
          v.dx - zv.v,
          v.dt - pY.v,
          c.v - sqrt(one_u * one_u + v.dx * v.dx),
          one_u * sa - v.dx * ca};
}

/// Kirchhoff rod, balance of momenta with force and momentum outputs.
template <class T>
std::array<T, 11> residual_rod_f4(std::span<const JetT<T>> j, double s, double fX, double fY,
                                  bool inertia = true) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  const auto& u = j[0];
  const auto& v = j[1];
  const auto& a = j[2];
  const auto& k = j[3];
  const auto& M = j[4];
  const auto& pX = j[5];
  const auto& pY = j[6];
  const auto& NX = j[7];
  const auto& NY = j[8];
  const auto& SX = j[9];
  const auto& SY = j[10];

  const T sa = sin(a.v);
  const T ca = cos(a.v);
  T r1 = NX.dx - SX.dx + fX;
  T r2 = NY.dx + SY.dx + fY;
  if (inertia) {
    r1 -= pX.dt;
    r2 -= pY.dt;
  }
  const T one_u = 1.0 + u.dx;
  return {r1,
          r2,
          NX.v - s * (one_u - ca),
          SX.v + k.v * M.dx * sa,
          NY.v - s * (v.dx - sa),
          SY.v + k.v * M.dx * ca,
          a.dx - M.v,
          u.dt - pX.v,
          v.dt - pY.v,
          k.v * sqrt(one_u * one_u + v.dx * v.dx) - 1.0,
          one_u * sa - v.dx * ca};
}

/// Residuals of any Form into `out` (size residual_count(form)).
template <class T>
void evaluate_residuals(FormId form, std::span<const JetT<T>> j, double s, double fX, double fY, bool inertia,
                        std::span<T> out, std::size_t point_index = 0) {
  auto copy = [&](const auto& arr) {
    for (std::size_t i = 0; i < arr.size(); ++i) out[i] = arr[i];
  };
  switch (form) {
    case FormId::bar_f1: out[0] = residual_bar_f1<T>(j, s, fX, inertia); return;
    case FormId::bar_f2a: copy(residual_bar_f2a<T>(j, s, fX, inertia)); return;
    case FormId::bar_f2b: copy(residual_bar_f2b<T>(j, s, fX, inertia)); return;
    case FormId::bar_f3: copy(residual_bar_f3<T>(j, s, fX, inertia)); return;
    case FormId::rod_f3: copy(residual_rod_f3<T>(j, s, fX, fY, inertia, point_index)); return;
    case FormId::rod_f4: copy(residual_rod_f4<T>(j, s, fX, fY, inertia)); return;
  }
}

/// Dynamic residuals at one point.
std::vector<double> residuals(FormId form, std::span<const Jet2> jets, double s, double fX, double fY);

/// The Form's residuals with every inertia (momentum-rate) term removed.
std::vector<double> static_operator(FormId form, std::span<const Jet2> jets, double s, double fX, double fY);

// ---------------------------------------------------------------------------
// Boundary and initial constraints

enum class Location { x0, x1, t0 };
enum class ConstraintKind { dirichlet, input_derivative, aed };
enum class Direction { x, t };

/// Algebraic expressions with derivatives, on the rod layout (u, v, M at
/// outputs 0, 1, 4):
///   axial_force:  s * (sqrt((1+u_x)^2 + v_x^2) - 1)
///   shear_force: -M_x / sqrt((1+u_x)^2 + v_x^2)
enum class AedKind { axial_force, shear_force };

struct Constraint {
  std::string name;
  Location location = Location::x0;
  ConstraintKind kind = ConstraintKind::dirichlet;
  int output = 0;
  Direction direction = Direction::x;
  AedKind aed = AedKind::axial_force;
  double prescribed = 0.0;
  double weight = 1.0;

  static Constraint dirichlet(std::string name, Location loc, int output, double value = 0.0);
  static Constraint derivative(std::string name, Location loc, int output, Direction dir, double value = 0.0);
  static Constraint algebraic(std::string name, Location loc, AedKind kind, double value = 0.0);
};

template <class T>
T evaluate_constraint(const Constraint& c, std::span<const JetT<T>> j, double s) {
  using std::sqrt;
  switch (c.kind) {
    case ConstraintKind::dirichlet: return j[c.output].v - c.prescribed;
    case ConstraintKind::input_derivative:
      return (c.direction == Direction::x ? j[c.output].dx : j[c.output].dt) - c.prescribed;
    case ConstraintKind::aed: {
      const T one_u = 1.0 + j[rod_out::u].dx;
      const T vx = j[rod_out::v].dx;
      const T stretch = sqrt(one_u * one_u + vx * vx);
      if (c.aed == AedKind::axial_force) return s * (stretch - 1.0) - c.prescribed;
      return -j[rod_out::M].dx / stretch - c.prescribed;
    }
  }
  return T{};
}

double evaluate_constraint(const Constraint& c, std::span<const Jet2> jets, double s);

// ---------------------------------------------------------------------------
// Problems

using LoadFn = std::function<double(double x, double t)>;

LoadFn constant_load(double value);

struct ProblemForm {
  std::string preset;
  FormId form = FormId::bar_f1;
  double slenderness = 1.0;
  double final_time = 4.0;
  LoadFn fX = constant_load(0.5);
  LoadFn fY = constant_load(0.0);
  std::vector<Constraint> constraints;
  std::vector<double> residual_weights;  // one per residual equation
  /// Known static displacement u_st(x) of output 0, when one exists.
  std::function<double(double)> static_solution;

  int n_out() const { return output_count(form); }
  int n_residuals() const { return residual_count(form); }
};

struct PresetOptions {
  std::optional<double> final_time;
  double slenderness = 1.0;
  double fX = 0.5;
  double fY = 0.0;
};

/// Presets: bar-pinned-pinned, bar-pinned-free, rod-cantilever,
/// rod-simply-supported. Throws UnknownPresetError for other names and
/// InvalidArgument when the Form does not belong to the preset's family.
ProblemForm make_problem(std::string_view preset, FormId form, const PresetOptions& opts = {});

std::vector<std::string> preset_names();

// ---------------------------------------------------------------------------
// Loss

/// J = sum_i w_i * mean_p(residual_{i,p}^2). Throws InvalidArgument on an
/// empty group or a weight count mismatch.
double assemble_loss(std::span<const std::vector<double>> groups, std::span<const double> weights);

}  // namespace pinn
