#include "pinn/run.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include "pinn/analysis.hpp"
#include "pinn/barriers.hpp"
#include "pinn/errors.hpp"

namespace pinn {

namespace fs = std::filesystem;

namespace {

double final_time_of(const TrainConfig& cfg) { return cfg.problem().final_time; }

std::vector<double> probe_times(const RunConfig& cfg) {
  const double horizon = cfg.probe_horizon > 0.0 ? cfg.probe_horizon : final_time_of(cfg.train);
  const auto n = static_cast<std::size_t>(std::llround(horizon / cfg.probe_dt)) + 1;
  return linspace(0.0, horizon, std::max<std::size_t>(n, 2));
}

/// The displacement history the diagnostics look at.
Probe primary_probe(const TrainConfig& cfg) {
  return bar_bc_of(cfg.preset) == BarBc::pinned_pinned ? Probe::midspan_disp : Probe::free_end_disp;
}

double probe_x(Probe p) { return p == Probe::midspan_disp ? 0.5 : 1.0; }

std::string num_or_empty(std::optional<double> v) { return v ? format_double(*v) : "nan"; }

CsvTable history_table(const ProbeSeries& ps, std::optional<TimeSeries> exact, std::string_view name) {
  std::vector<std::string> header{"t", std::string(name), "extrapolated"};
  if (exact) header.push_back("exact");
  CsvTable table(header);
  for (std::size_t i = 0; i < ps.series.size(); ++i) {
    std::vector<std::string> row{format_double(ps.series.times()[i]), format_double(ps.series.values()[i]),
                                 ps.extrapolated[i] ? "1" : "0"};
    if (exact) row.push_back(format_double(exact->values()[i]));
    table.add_row(std::move(row));
  }
  return table;
}

}  // namespace

fs::path resolve_out_dir(const RunConfig& cfg) {
  if (!cfg.out_dir.empty()) return cfg.out_dir;
  if (const char* env = std::getenv("PINN_OUT_DIR"); env && *env) return env;
  return fs::current_path();
}

std::optional<TimeSeries> reference_history(const TrainConfig& cfg, double x, std::span<const double> times) {
  const auto bc = bar_bc_of(cfg.preset);
  if (!bc) return std::nullopt;
  const double s = cfg.preset_options.slenderness;
  const double scale = 2.0 * cfg.preset_options.fX / s;
  std::vector<double> v(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) v[i] = scale * exact_bar(*bc, x, std::sqrt(s) * times[i]);
  return TimeSeries({times.begin(), times.end()}, std::move(v));
}

CsvTable loss_table(const RunRecord& rec) {
  std::vector<std::string> header{"step", "total_loss"};
  header.insert(header.end(), rec.group_names.begin(), rec.group_names.end());
  for (const char* h : {"lr", "pinn_loss", "barrier", "margin", "inside_buffer"}) header.emplace_back(h);
  CsvTable table(header);
  for (const auto& row : rec.history) {
    std::vector<std::string> cells{std::to_string(row.step), format_double(row.total)};
    for (double g : row.groups) cells.push_back(format_double(g));
    cells.push_back(format_double(row.lr));
    cells.push_back(format_double(row.pinn));
    cells.push_back(format_double(row.barrier));
    cells.push_back(format_double(row.margin));
    cells.emplace_back(row.inside_buffer ? "1" : "0");
    table.add_row(std::move(cells));
  }
  return table;
}

CsvTable diagnostics_header() {
  return CsvTable({"step", "damping_pct", "quality", "shift", "vshift", "amp_ptp", "smse", "re", "static_flag"});
}

std::vector<std::string> diagnostics_row(std::int64_t step, const MlpNetwork& net, const RunConfig& cfg) {
  const auto times = probe_times(cfg);
  const Probe probe = primary_probe(cfg.train);
  const ProbeSeries ps = sample_history(net, cfg.train.form, probe, times, final_time_of(cfg.train));

  std::optional<double> pct, shift, vshift, amp_ptp, smse, re;
  std::string quality = "n/a";
  try {
    const Damping d = damping_percent(ps.series);
    pct = d.pct;
    quality = std::string(to_string(d.quality));
  } catch (const InsufficientPeaksError&) {
  }
  if (const auto exact = reference_history(cfg.train, probe_x(probe), times)) {
    try {
      const ShiftAmpFit fit = fit_shift_amp(ps.series, *exact);
      shift = fit.shift;
      vshift = fit.vshift;
      amp_ptp = fit.amp_ptp();
    } catch (const std::exception&) {
    }
    const ErrorMetrics e = smse_re(ps.series.values(), exact->values(), exact->peak_to_peak());
    smse = e.smse;
    re = e.re;
  }
  const bool is_static = detect_static(ps.series).is_static;
  return {std::to_string(step), num_or_empty(pct), quality,           num_or_empty(shift), num_or_empty(vshift),
          num_or_empty(amp_ptp), num_or_empty(smse), num_or_empty(re), is_static ? "1" : "0"};
}

RunResult execute_run(const RunConfig& cfg, std::ostream* log) {
  RunResult result;
  const fs::path dir = resolve_out_dir(cfg);
  fs::create_directories(dir);
  const std::string prefix = cfg.train.run_id + "-";
  auto out = [&](const std::string& name) {
    result.files.push_back(dir / (prefix + name));
    return result.files.back();
  };

  {
    std::ofstream f(out("config.ini"));
    f << to_config_text(cfg);
  }

  const std::int64_t log_every = std::max<std::int64_t>(1, cfg.train.schedule.total_steps() / 20);
  ProgressFn progress;
  if (log) {
    progress = [&](const HistoryRow& row) {
      if (row.step % log_every == 0) *log << "step " << row.step << "  loss " << row.total << "  lr " << row.lr << "\n";
    };
  }
  result.record = train(cfg.train, progress);
  const RunRecord& rec = result.record;

  write_grid_csv(rec.grid, out("grid.csv"));
  write_csv(loss_table(rec), out("loss.csv"));

  // A diverged run may end on non-finite parameters.
  const MlpNetwork net = rec.ok() ? rec.final_network() : rec.best_network();
  const double T = final_time_of(cfg.train);
  const auto times = probe_times(cfg);
  const auto form = cfg.train.form;
  write_csv(history_table(sample_history(net, form, Probe::midspan_disp, times, T),
                          reference_history(cfg.train, 0.5, times), "u"),
            out("midspan.csv"));
  write_csv(history_table(sample_history(net, form, Probe::free_end_disp, times, T),
                          reference_history(cfg.train, 1.0, times), "u"),
            out("free-end.csv"));
  write_csv(history_table(sample_history(net, form, Probe::velocity, times, T, 0.5), std::nullopt, "velocity"),
            out("velocity.csv"));
  write_csv(history_table(sample_history(net, form, Probe::slope, times, T, 0.0), std::nullopt, "slope"),
            out("slope.csv"));

  {
    CsvTable shape({"t", "x", "u"});
    const auto xs = linspace(0.0, 1.0, static_cast<std::size_t>(cfg.shape_points));
    for (int k = 0; k <= 4; ++k) {
      const double t = T * k / 4.0;
      const auto u = sample_shape(net, xs, t);
      for (std::size_t i = 0; i < xs.size(); ++i) shape.add_row(std::vector<double>{t, xs[i], u[i]});
    }
    write_csv(shape, out("shape.csv"));
  }

  CsvTable diag = diagnostics_header();
  for (const auto& ck : rec.checkpoints) {
    try {
      diag.add_row(diagnostics_row(static_cast<std::int64_t>(ck.step), ck.network(), cfg));
    } catch (const InvalidArgument&) {
      diag.add_row({std::to_string(ck.step), "nan", "n/a", "nan", "nan", "nan", "nan", "nan", "0"});
    }
    save_checkpoint(ck, out(std::to_string(ck.step) + ".ckpt"));
  }
  write_csv(diag, out("diagnostics.csv"));

  if (rec.diverged) {
    result.exit_code = exit_diverged;
  } else if (rec.aborted_inside_buffer) {
    result.exit_code = exit_inside_buffer;
  }
  if (log) {
    if (!rec.ok()) *log << "run stopped: " << rec.failure << "\n";
    *log << "best step " << rec.best_step << "  loss " << rec.best_loss << "\n";
  }
  return result;
}

}  // namespace pinn
