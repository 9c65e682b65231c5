#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "pinn/config.hpp"
#include "pinn/csv.hpp"
#include "pinn/training.hpp"

namespace pinn {

enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_diverged = 2, exit_inside_buffer = 3 };

struct RunResult {
  RunRecord record;
  int exit_code = exit_ok;
  std::vector<std::filesystem::path> files;
};

/// cfg.out_dir, else $PINN_OUT_DIR, else the working directory.
std::filesystem::path resolve_out_dir(const RunConfig& cfg);

/// Trains and writes, all prefixed "<run_id>-":
///   config.ini, grid.csv, loss.csv, midspan.csv, free-end.csv, velocity.csv,
///   slope.csv, shape.csv, diagnostics.csv and <step>.ckpt per checkpoint.
/// Progress lines go to `log` when given.
RunResult execute_run(const RunConfig& cfg, std::ostream* log = nullptr);

/// step, total_loss, one column per group, lr, then pinn_loss, barrier,
/// margin and inside_buffer.
CsvTable loss_table(const RunRecord& rec);

/// Exact reference displacement for bar presets, scaled to the problem's
/// slenderness and load: u = (2 fX / s) u1(x, sqrt(s) t).
std::optional<TimeSeries> reference_history(const TrainConfig& cfg, double x, std::span<const double> times);

/// One row of the diagnostics table for a network.
CsvTable diagnostics_header();
std::vector<std::string> diagnostics_row(std::int64_t step, const MlpNetwork& net, const RunConfig& cfg);

}  // namespace pinn
