#include "pinn/training.hpp"

#include <cmath>
#include <mutex>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

#include "pinn/adam.hpp"
#include "pinn/errors.hpp"
#include "pinn/jets.hpp"

namespace pinn {

Grid make_grid(const GridSpec& spec, double final_time) {
  switch (spec.kind) {
    case GridKind::regular: return regular_grid(spec.N, final_time);
    case GridKind::fixed_random: return random_grid(spec.N, final_time, spec.seed);
    case GridKind::varying_random: return random_grid(spec.N, final_time, std::nullopt);
  }
  throw InvalidArgument("unknown grid kind");
}

std::vector<int> TrainConfig::widths() const {
  std::vector<int> w{2};
  for (int i = 0; i < hidden; ++i) w.push_back(width);
  w.push_back(output_count(form));
  return w;
}

ProblemForm TrainConfig::problem() const { return make_problem(preset, form, preset_options); }

void TrainConfig::validate() const {
  if (width < 1 || hidden < 1) throw InvalidArgument("network needs at least one hidden layer of width >= 1");
  schedule.validate();
  if (steps != 0 && steps != schedule.total_steps())
    throw InvalidArgument("steps (" + std::to_string(steps) + ") must equal the schedule total (" +
                          std::to_string(schedule.total_steps()) + ")");
  if (deterministic && grid.kind == GridKind::varying_random)
    throw InvalidArgument("a varying random grid cannot be deterministic");
  if (checkpoint_stride < 0 || history_stride < 1) throw InvalidArgument("strides must be positive");
  if (barrier.weight < 0.0 || barrier.depth < 0.0) throw InvalidArgument("barrier weight and depth must be >= 0");
  if (workers < 1) throw InvalidArgument("workers must be >= 1");
}

namespace {

// Every step allocates and frees the same few hundred block-sized matrices.
// With glibc's default thresholds they straddle the mmap/trim limits and each
// step pays page faults to regrow the heap; keep that memory mapped instead.
void keep_heap_resident() {
#if defined(__GLIBC__)
  static std::once_flag once;
  std::call_once(once, [] {
    mallopt(M_MMAP_THRESHOLD, 256 << 20);
    mallopt(M_TRIM_THRESHOLD, 512 << 20);
  });
#endif
}

}  // namespace

RunRecord train(const TrainConfig& cfg, const ProgressFn& progress) {
  return train(cfg, init_params(cfg.widths(), cfg.init), progress);
}

RunRecord train(const TrainConfig& cfg, std::vector<double> initial_params, const ProgressFn& progress) {
  cfg.validate();
  keep_heap_resident();
  const ProblemForm problem = cfg.problem();

  RunRecord rec;
  rec.widths = cfg.widths();
  rec.grid = make_grid(cfg.grid, problem.final_time);
  const PinnLoss loss(problem, rec.grid);
  rec.group_names = loss.group_names();

  MlpNetwork net(rec.widths, std::move(initial_params));
  AdamState adam(net.params().size());
  const EvalOptions opts{cfg.workers};
  const std::int64_t steps = cfg.schedule.total_steps();

  auto keep_checkpoint = [&](std::int64_t step) {
    Checkpoint ck;
    ck.widths = rec.widths;
    ck.init_kind = cfg.init.kind;
    ck.seed = cfg.init.seed;
    ck.step = static_cast<std::uint64_t>(step);
    ck.params.assign(net.params().begin(), net.params().end());
    rec.checkpoints.push_back(std::move(ck));
  };

  auto record = [&](std::int64_t step, const LossTerms& t, double lr, bool force) {
    if (t.pinn < rec.best_loss) {
      rec.best_loss = t.pinn;
      rec.best_step = step;
      rec.best_params.assign(net.params().begin(), net.params().end());
    }
    if (!force && step % cfg.history_stride != 0) return;
    HistoryRow row{step, t.total, t.pinn, t.barrier, t.margin, lr, t.inside_buffer, t.groups};
    rec.history.push_back(row);
    if (progress) progress(rec.history.back());
  };

  auto fail = [&](std::int64_t step, const std::exception& e) {
    rec.diverged = true;
    rec.divergence_step = step;
    rec.failure = e.what();
  };

  for (std::int64_t step = 0; step < steps; ++step) {
    const double lr = lr_at(cfg.schedule, step);
    const BarrierSpec* barrier = cfg.barrier.active_at(step) ? &cfg.barrier : nullptr;
    LossTerms terms;
    const LossFn fn = [&](const JetBatch& jets, JetBatch& adjoint) {
      terms = loss.evaluate(jets, &adjoint, barrier);
      return terms.total;
    };
    try {
      const LossGradient lg = loss_gradient(net, fn, loss.points(), opts);
      if (terms.inside_buffer) {
        ++rec.inside_buffer_events;
        if (cfg.abort_inside_buffer) {
          rec.aborted_inside_buffer = true;
          rec.failure = InsideBufferError(terms.margin, cfg.barrier.depth).what();
          record(step, terms, lr, true);
          break;
        }
      }
      record(step, terms, lr, false);
      if (cfg.checkpoint_stride > 0 && step > 0 && step % cfg.checkpoint_stride == 0) keep_checkpoint(step);
      adam_step(adam, net.params(), lg.grad, lr);
      rec.steps_completed = step + 1;
    } catch (const DivergedError& e) {
      fail(step, e);
      break;
    } catch (const NearSingularExtensionError& e) {
      fail(step, e);
      break;
    }
  }

  if (rec.ok()) {
    // Loss of the final parameters.
    try {
      const JetBatch jets = jet_forward(net, loss.points(), opts);
      const BarrierSpec* barrier = cfg.barrier.active_at(steps) ? &cfg.barrier : nullptr;
      const LossTerms terms = loss.evaluate(jets, nullptr, barrier);
      if (!std::isfinite(terms.total)) throw DivergedError("non-finite final loss");
      record(steps, terms, lr_at(cfg.schedule, steps - 1), true);
    } catch (const DivergedError& e) {
      fail(steps, e);
    } catch (const NearSingularExtensionError& e) {
      fail(steps, e);
    }
  }
  rec.final_params.assign(net.params().begin(), net.params().end());
  if (rec.best_params.empty()) rec.best_params = rec.final_params;
  keep_checkpoint(rec.steps_completed);
  return rec;
}

}  // namespace pinn
