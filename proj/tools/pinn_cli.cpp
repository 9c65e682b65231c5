// Command-line front end: train from a config file, verify the numerics,
// print exact bar histories and export grids.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "pinn/analysis.hpp"
#include "pinn/config.hpp"
#include "pinn/csv.hpp"
#include "pinn/errors.hpp"
#include "pinn/run.hpp"
#include "pinn/sampling.hpp"
#include "pinn/verify.hpp"

namespace {

struct RunFlags {
  std::string config;
  std::vector<std::string> set;
  std::string barrier;
  std::optional<double> depth, weight;
  std::optional<long long> off_at, steps;
  std::optional<int> workers;
  std::optional<std::string> run_id, out_dir;
  bool quiet = false;
};

std::vector<std::string> overrides_from(const RunFlags& f) {
  std::vector<std::string> o = f.set;
  if (!f.barrier.empty()) {
    const auto colon = f.barrier.find(':');
    if (colon == std::string::npos) throw pinn::ConfigError("--barrier expects shape:basis", 0, "barrier");
    o.push_back("barrier.shape=" + f.barrier.substr(0, colon));
    o.push_back("barrier.basis=" + f.barrier.substr(colon + 1));
  }
  if (f.depth) o.push_back("barrier.depth=" + pinn::format_double(*f.depth));
  if (f.weight) o.push_back("barrier.weight=" + pinn::format_double(*f.weight));
  if (f.off_at) o.push_back("barrier.off_at=" + std::to_string(*f.off_at));
  if (f.steps) o.push_back("train.steps=" + std::to_string(*f.steps));
  if (f.workers) o.push_back("train.workers=" + std::to_string(*f.workers));
  if (f.run_id) o.push_back("run.run_id=" + *f.run_id);
  if (f.out_dir) o.push_back("run.out_dir=" + *f.out_dir);
  return o;
}

int do_run(const RunFlags& f) {
  const auto overrides = overrides_from(f);
  const pinn::RunConfig cfg =
      f.config.empty() ? pinn::parse_config("", overrides) : pinn::load_config(f.config, overrides);
  const auto result = pinn::execute_run(cfg, f.quiet ? nullptr : &std::cout);
  if (!f.quiet) {
    for (const auto& p : result.files) std::cout << "wrote " << p.string() << "\n";
  }
  if (result.exit_code != pinn::exit_ok) std::cerr << "error: " << result.record.failure << "\n";
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Physics-informed network training for axial bars and Kirchhoff rods"};
  app.require_subcommand(1);

  RunFlags rf;
  auto* run = app.add_subcommand("run", "Train a network and write its artifacts");
  run->add_option("-c,--config", rf.config, "Config file (INI); defaults apply when omitted")->check(CLI::ExistingFile);
  run->add_option("--set", rf.set, "Override a key: section.key=value (repeatable)");
  run->add_option("--barrier", rf.barrier, "Barrier as shape:basis, e.g. inverse:acceleration");
  run->add_option("--barrier-depth", rf.depth, "Barrier buffer depth");
  run->add_option("--barrier-weight", rf.weight, "Barrier weight (0 disables)");
  run->add_option("--barrier-off-at", rf.off_at, "First step without the barrier");
  run->add_option("--steps", rf.steps, "Total steps (single cycle unless the config lists cycles)");
  run->add_option("--workers", rf.workers, "Threads per step");
  run->add_option("--run-id", rf.run_id, "Artifact prefix");
  run->add_option("--out-dir", rf.out_dir, "Artifact directory (default: $PINN_OUT_DIR or .)");
  run->add_flag("-q,--quiet", rf.quiet, "No progress output");

  std::string suite = "all";
  std::string ckpt_file;
  auto* verify = app.add_subcommand("verify", "Check derivatives, gradients, the oracle and schedules");
  verify->add_option("suite", suite, "oracle | gradient | schedule | checkpoint | all")
      ->check(CLI::IsMember({"oracle", "gradient", "schedule", "checkpoint", "all"}));
  verify->add_option("--checkpoint", ckpt_file, "Also load this checkpoint file");

  std::string bc = "pinned-pinned";
  double x = 0.5, t_max = 4.0, dt = 0.01;
  int modes = pinn::kDefaultModes;
  auto* exact = app.add_subcommand("exact", "Print the exact bar history as CSV");
  exact->add_option("--bc", bc, "pinned-pinned | pinned-free")->check(CLI::IsMember({"pinned-pinned", "pinned-free"}));
  exact->add_option("--x", x, "Position");
  exact->add_option("--t-max", t_max, "Last time");
  exact->add_option("--dt", dt, "Time step")->check(CLI::PositiveNumber);
  exact->add_option("--modes", modes, "Number of modes")->check(CLI::PositiveNumber);

  std::string grid_kind = "fixed_random", grid_out;
  int grid_n = 51;
  double grid_t = 4.0;
  unsigned long long grid_seed = 42;
  auto* grid = app.add_subcommand("grid", "Write a collocation grid as CSV");
  grid->add_option("--kind", grid_kind, "regular | fixed_random | varying_random")
      ->check(CLI::IsMember({"regular", "fixed_random", "varying_random"}));
  grid->add_option("-N", grid_n, "Points per side");
  grid->add_option("-T", grid_t, "Final time");
  grid->add_option("--seed", grid_seed, "Seed of fixed random grids");
  grid->add_option("-o,--out", grid_out, "Output file")->required();

  app.add_subcommand("keys", "List config keys with their defaults");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return do_run(rf);

    if (*verify) {
      std::vector<pinn::CheckResult> results;
      auto add = [&](std::vector<pinn::CheckResult> r) { results.insert(results.end(), r.begin(), r.end()); };
      if (suite == "all" || suite == "oracle") add(pinn::verify_oracle());
      if (suite == "all" || suite == "gradient") add(pinn::verify_gradients());
      if (suite == "all" || suite == "schedule") add(pinn::verify_schedule());
      if (suite == "all" || suite == "checkpoint" || !ckpt_file.empty()) {
        add(pinn::verify_checkpoint(ckpt_file.empty() ? std::nullopt
                                                      : std::optional<std::filesystem::path>(ckpt_file)));
      }
      return pinn::print_report(results, std::cout) ? 0 : 1;
    }

    if (*exact) {
      const auto b = bc == "pinned-pinned" ? pinn::BarBc::pinned_pinned : pinn::BarBc::pinned_free;
      pinn::CsvTable table({"t", "u"});
      const auto n = static_cast<std::size_t>(std::llround(t_max / dt)) + 1;
      for (double t : pinn::linspace(0.0, t_max, n)) table.add_row(std::vector<double>{t, pinn::exact_bar(b, x, t, modes)});
      pinn::write_csv(table, std::cout);
      return 0;
    }

    if (*grid) {
      pinn::GridSpec spec{grid_kind == "regular"        ? pinn::GridKind::regular
                          : grid_kind == "fixed_random" ? pinn::GridKind::fixed_random
                                                        : pinn::GridKind::varying_random,
                          grid_n, grid_seed};
      pinn::write_grid_csv(pinn::make_grid(spec, grid_t), grid_out);
      return 0;
    }

    for (const auto& k : pinn::config_keys()) {
      std::cout << k.name << " = " << k.default_value << "    # " << k.help << "\n";
    }
    return 0;
  } catch (const pinn::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
  } catch (const pinn::UnknownPresetError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const pinn::CheckpointError& e) {
    std::cerr << "checkpoint error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return pinn::exit_usage;
}
