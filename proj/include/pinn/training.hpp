#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pinn/barriers.hpp"
#include "pinn/checkpoint.hpp"
#include "pinn/loss.hpp"
#include "pinn/network.hpp"
#include "pinn/problems.hpp"
#include "pinn/sampling.hpp"
#include "pinn/schedule.hpp"

namespace pinn {

struct GridSpec {
  GridKind kind = GridKind::fixed_random;
  int N = 51;
  std::uint64_t seed = 42;
};

/// Builds the grid; varying_random draws a fresh seed.
Grid make_grid(const GridSpec& spec, double final_time);

struct TrainConfig {
  std::string preset = "bar-pinned-pinned";
  FormId form = FormId::bar_f2a;
  PresetOptions preset_options;
  GridSpec grid;
  int width = 32;   // units per hidden layer
  int hidden = 2;   // hidden layers
  Initializer init;
  Schedule schedule;
  /// Must equal schedule.total_steps(); 0 takes it from the schedule.
  std::int64_t steps = 0;
  BarrierSpec barrier;
  /// Stop at the first inside-buffer event instead of applying the penalty.
  bool abort_inside_buffer = false;
  /// Keep a checkpoint every this many steps (0: final only).
  std::int64_t checkpoint_stride = 0;
  /// Record the loss every this many steps; the final state is always recorded.
  std::int64_t history_stride = 1;
  /// Requires a reproducible grid. Gradient reduction is always ordered, so
  /// results never depend on `workers`.
  bool deterministic = true;
  std::string run_id = "run";
  int workers = 1;

  /// Network widths [2, width x hidden, n_out].
  std::vector<int> widths() const;
  ProblemForm problem() const;
  /// Throws InvalidArgument on an inconsistent configuration.
  void validate() const;
};

struct HistoryRow {
  std::int64_t step = 0;
  double total = 0.0;
  double pinn = 0.0;
  double barrier = 0.0;
  double margin = 0.0;
  double lr = 0.0;
  bool inside_buffer = false;
  std::vector<double> groups;
};

struct RunRecord {
  std::vector<std::string> group_names;
  std::vector<HistoryRow> history;
  Grid grid;
  std::vector<int> widths;
  std::int64_t steps_completed = 0;

  /// Lowest PINN loss (barrier excluded) seen, and the parameters giving it.
  std::int64_t best_step = -1;
  double best_loss = std::numeric_limits<double>::infinity();
  std::vector<double> best_params;
  std::vector<double> final_params;

  bool diverged = false;
  bool aborted_inside_buffer = false;
  std::int64_t divergence_step = -1;
  std::string failure;
  std::int64_t inside_buffer_events = 0;

  std::vector<Checkpoint> checkpoints;

  bool ok() const { return !diverged && !aborted_inside_buffer; }
  MlpNetwork final_network() const { return MlpNetwork(widths, final_params); }
  MlpNetwork best_network() const { return MlpNetwork(widths, best_params); }
};

/// Called after each recorded history row.
using ProgressFn = std::function<void(const HistoryRow&)>;

/// Full-batch Adam training. Each step evaluates jets on the whole grid,
/// assembles the loss (plus the barrier while it is active), back-propagates
/// and updates with lr_at(step). Divergence halts the run and marks the record.
RunRecord train(const TrainConfig& cfg, const ProgressFn& progress = {});

/// Same, starting from given parameters instead of the initializer.
RunRecord train(const TrainConfig& cfg, std::vector<double> initial_params, const ProgressFn& progress = {});

}  // namespace pinn
