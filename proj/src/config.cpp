#include "pinn/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "pinn/csv.hpp"
#include "pinn/errors.hpp"

namespace pinn {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

double to_double(std::string_view v) { return parse_double(trim(v)); }

std::int64_t to_int(std::string_view v) {
  v = trim(v);
  std::int64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    throw InvalidArgument("not an integer: '" + std::string(v) + "'");
  return out;
}

bool to_bool(std::string_view v) {
  const std::string s = lower(trim(v));
  if (s == "true" || s == "yes" || s == "1" || s == "on") return true;
  if (s == "false" || s == "no" || s == "0" || s == "off") return false;
  throw InvalidArgument("not a boolean: '" + s + "'");
}

std::vector<std::string_view> split_list(std::string_view v) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = v.find(',');
    const auto item = trim(v.substr(0, comma));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    v.remove_prefix(comma + 1);
  }
  return out;
}

std::vector<double> to_doubles(std::string_view v) {
  std::vector<double> out;
  for (auto item : split_list(v)) out.push_back(to_double(item));
  return out;
}

std::vector<std::int64_t> to_ints(std::string_view v) {
  std::vector<std::int64_t> out;
  for (auto item : split_list(v)) out.push_back(to_int(item));
  return out;
}

template <class T>
std::string join(const std::vector<T>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    if constexpr (std::is_floating_point_v<T>) {
      out += format_double(xs[i]);
    } else {
      out += std::to_string(xs[i]);
    }
  }
  return out;
}

GridKind parse_grid_kind(std::string_view v) {
  const std::string s = lower(trim(v));
  if (s == "regular") return GridKind::regular;
  if (s == "fixed_random" || s == "fixed-random" || s == "random") return GridKind::fixed_random;
  if (s == "varying_random" || s == "varying-random") return GridKind::varying_random;
  throw InvalidArgument("unknown grid kind '" + s + "'");
}

using Setter = std::function<void(RunConfig&, std::string_view)>;
using Getter = std::function<std::string(const RunConfig&)>;

struct KeyDef {
  ConfigKey doc;
  Setter set;
  Getter get;
};

const std::vector<KeyDef>& key_defs() {
  static const std::vector<KeyDef> defs = [] {
    std::vector<KeyDef> d;
    auto add = [&](std::string name, std::string help, Setter set, Getter get) {
      d.push_back({{std::move(name), {}, std::move(help)}, std::move(set), std::move(get)});
    };
    // problem
    add("problem.preset", "bar-pinned-pinned | bar-pinned-free | rod-cantilever | rod-simply-supported",
        [](RunConfig& c, std::string_view v) { c.train.preset = lower(v); },
        [](const RunConfig& c) { return c.train.preset; });
    add("problem.form", "Bar.F1 | Bar.F2a | Bar.F2b | Bar.F3 | Rod.F3 | Rod.F4",
        [](RunConfig& c, std::string_view v) { c.train.form = parse_form_id(v); },
        [](const RunConfig& c) { return std::string(to_string(c.train.form)); });
    add("problem.T", "final time; 0 keeps the preset default",
        [](RunConfig& c, std::string_view v) {
          const double t = to_double(v);
          if (t > 0.0) {
            c.train.preset_options.final_time = t;
          } else {
            c.train.preset_options.final_time.reset();
          }
        },
        [](const RunConfig& c) { return format_double(c.train.preset_options.final_time.value_or(0.0)); });
    add("problem.s", "slenderness A L^2 / I",
        [](RunConfig& c, std::string_view v) { c.train.preset_options.slenderness = to_double(v); },
        [](const RunConfig& c) { return format_double(c.train.preset_options.slenderness); });
    add("problem.fX", "uniform axial load",
        [](RunConfig& c, std::string_view v) { c.train.preset_options.fX = to_double(v); },
        [](const RunConfig& c) { return format_double(c.train.preset_options.fX); });
    add("problem.fY", "uniform transverse load (rods)",
        [](RunConfig& c, std::string_view v) { c.train.preset_options.fY = to_double(v); },
        [](const RunConfig& c) { return format_double(c.train.preset_options.fY); });
    add("problem.bc", "boundary part of the preset (e.g. pinned-free); empty keeps the preset",
        [](RunConfig& c, std::string_view v) { c.bc = lower(v); }, [](const RunConfig& c) { return c.bc; });
    // network
    add("network.W", "units per hidden layer", [](RunConfig& c, std::string_view v) { c.train.width = static_cast<int>(to_int(v)); },
        [](const RunConfig& c) { return std::to_string(c.train.width); });
    add("network.H", "hidden layers", [](RunConfig& c, std::string_view v) { c.train.hidden = static_cast<int>(to_int(v)); },
        [](const RunConfig& c) { return std::to_string(c.train.hidden); });
    add("network.initializer", "he_uniform | glorot_uniform",
        [](RunConfig& c, std::string_view v) { c.train.init.kind = parse_init_kind(v); },
        [](const RunConfig& c) { return std::string(to_string(c.train.init.kind)); });
    add("network.seed", "initializer seed",
        [](RunConfig& c, std::string_view v) { c.train.init.seed = static_cast<std::uint64_t>(to_int(v)); },
        [](const RunConfig& c) { return std::to_string(c.train.init.seed); });
    // grid
    add("grid.kind", "regular | fixed_random | varying_random",
        [](RunConfig& c, std::string_view v) { c.train.grid.kind = parse_grid_kind(v); },
        [](const RunConfig& c) { return std::string(to_string(c.train.grid.kind)); });
    add("grid.N", "points per side (odd for regular grids)",
        [](RunConfig& c, std::string_view v) { c.train.grid.N = static_cast<int>(to_int(v)); },
        [](const RunConfig& c) { return std::to_string(c.train.grid.N); });
    add("grid.seed", "seed of fixed random grids",
        [](RunConfig& c, std::string_view v) { c.train.grid.seed = static_cast<std::uint64_t>(to_int(v)); },
        [](const RunConfig& c) { return std::to_string(c.train.grid.seed); });
    // schedule
    add("schedule.kind", "LRS1_CA | LRS2_VCA | LRS3_NCA | LRS4_PIECEWISE",
        [](RunConfig& c, std::string_view v) { c.train.schedule.kind = parse_schedule_kind(trim(v)); },
        [](const RunConfig& c) { return std::string(to_string(c.train.schedule.kind)); });
    add("schedule.init_lr", "initial rate, or one rate per cycle for LRS2_VCA",
        [](RunConfig& c, std::string_view v) {
          const auto xs = to_doubles(v);
          if (xs.empty()) throw InvalidArgument("empty learning-rate list");
          c.train.schedule.init_lr = xs.front();
          c.train.schedule.init_lrs = xs.size() > 1 ? xs : std::vector<double>{};
        },
        [](const RunConfig& c) {
          return c.train.schedule.init_lrs.empty() ? format_double(c.train.schedule.init_lr)
                                                    : join(c.train.schedule.init_lrs);
        });
    add("schedule.cycles", "steps per cycle",
        [](RunConfig& c, std::string_view v) {
          c.train.schedule.cycle_steps = to_ints(v);
          c.cycles_set = true;
        },
        [](const RunConfig& c) { return join(c.train.schedule.cycle_steps); });
    add("schedule.period", "steps per period",
        [](RunConfig& c, std::string_view v) { c.train.schedule.period_steps = to_int(v); },
        [](const RunConfig& c) { return std::to_string(c.train.schedule.period_steps); });
    add("schedule.decay", "rate ratio over the first period of a cycle",
        [](RunConfig& c, std::string_view v) { c.train.schedule.decay = to_double(v); },
        [](const RunConfig& c) { return format_double(c.train.schedule.decay); });
    add("schedule.factors", "LRS4_PIECEWISE factors at the start of cycles 2, 3, ...",
        [](RunConfig& c, std::string_view v) { c.train.schedule.factors = to_doubles(v); },
        [](const RunConfig& c) { return join(c.train.schedule.factors); });
    add("schedule.extension", "extra steps appended to the last cycle (ELRS)",
        [](RunConfig& c, std::string_view v) { c.train.schedule.extension_steps = to_int(v); },
        [](const RunConfig& c) { return std::to_string(c.train.schedule.extension_steps); });
    // train
    add("train.steps", "total steps; sets a single cycle when schedule.cycles is absent; 0 uses the cycles",
        [](RunConfig& c, std::string_view v) { c.train.steps = to_int(v); },
        [](const RunConfig& c) { return std::to_string(c.train.steps); });
    add("train.checkpoint_stride", "checkpoint every n steps (0: final only)",
        [](RunConfig& c, std::string_view v) { c.train.checkpoint_stride = to_int(v); },
        [](const RunConfig& c) { return std::to_string(c.train.checkpoint_stride); });
    add("train.history_stride", "loss row every n steps",
        [](RunConfig& c, std::string_view v) { c.train.history_stride = to_int(v); },
        [](const RunConfig& c) { return std::to_string(c.train.history_stride); });
    add("train.deterministic", "require a reproducible grid",
        [](RunConfig& c, std::string_view v) { c.train.deterministic = to_bool(v); },
        [](const RunConfig& c) { return std::string(c.train.deterministic ? "true" : "false"); });
    add("train.workers", "threads per step (results do not depend on it)",
        [](RunConfig& c, std::string_view v) { c.train.workers = static_cast<int>(to_int(v)); },
        [](const RunConfig& c) { return std::to_string(c.train.workers); });
    // barrier
    add("barrier.shape", "inverse | log", [](RunConfig& c, std::string_view v) { c.train.barrier.shape = parse_barrier_shape(lower(v)); },
        [](const RunConfig& c) { return std::string(to_string(c.train.barrier.shape)); });
    add("barrier.basis", "acceleration | static_operator | static_solution",
        [](RunConfig& c, std::string_view v) { c.train.barrier.basis = parse_barrier_basis(lower(v)); },
        [](const RunConfig& c) { return std::string(to_string(c.train.barrier.basis)); });
    add("barrier.depth", "buffer depth", [](RunConfig& c, std::string_view v) { c.train.barrier.depth = to_double(v); },
        [](const RunConfig& c) { return format_double(c.train.barrier.depth); });
    add("barrier.weight", "barrier weight (0 disables)",
        [](RunConfig& c, std::string_view v) { c.train.barrier.weight = to_double(v); },
        [](const RunConfig& c) { return format_double(c.train.barrier.weight); });
    add("barrier.off_at", "first step without the barrier (-1: never)",
        [](RunConfig& c, std::string_view v) {
          const auto s = to_int(v);
          if (s >= 0) {
            c.train.barrier.off_at = s;
          } else {
            c.train.barrier.off_at.reset();
          }
        },
        [](const RunConfig& c) { return std::to_string(c.train.barrier.off_at.value_or(-1)); });
    add("barrier.abort_inside", "stop the run at the first inside-buffer event",
        [](RunConfig& c, std::string_view v) { c.train.abort_inside_buffer = to_bool(v); },
        [](const RunConfig& c) { return std::string(c.train.abort_inside_buffer ? "true" : "false"); });
    // run
    add("run.run_id", "prefix of every artifact", [](RunConfig& c, std::string_view v) { c.train.run_id = std::string(trim(v)); },
        [](const RunConfig& c) { return c.train.run_id; });
    add("run.out_dir", "artifact directory (empty: $PINN_OUT_DIR, else .)",
        [](RunConfig& c, std::string_view v) { c.out_dir = std::string(trim(v)); },
        [](const RunConfig& c) { return c.out_dir.string(); });
    add("run.probe_dt", "time spacing of probe histories",
        [](RunConfig& c, std::string_view v) { c.probe_dt = to_double(v); },
        [](const RunConfig& c) { return format_double(c.probe_dt); });
    add("run.probe_horizon", "last probe time (0: final time); later times are extrapolation",
        [](RunConfig& c, std::string_view v) { c.probe_horizon = to_double(v); },
        [](const RunConfig& c) { return format_double(c.probe_horizon); });
    add("run.shape_points", "x samples of shape snapshots",
        [](RunConfig& c, std::string_view v) { c.shape_points = static_cast<int>(to_int(v)); },
        [](const RunConfig& c) { return std::to_string(c.shape_points); });

    const RunConfig defaults;
    for (auto& k : d) k.doc.default_value = k.get(defaults);
    return d;
  }();
  return defs;
}

const KeyDef* find_key(std::string_view dotted) {
  for (const auto& k : key_defs()) {
    if (k.doc.name == dotted) return &k;
  }
  return nullptr;
}

}  // namespace

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> out;
    for (const auto& k : key_defs()) out.push_back(k.doc);
    return out;
  }();
  return keys;
}

void apply_setting(RunConfig& cfg, std::string_view dotted_key, std::string_view value) {
  const KeyDef* k = find_key(trim(dotted_key));
  if (!k) throw ConfigError("unknown key '" + std::string(dotted_key) + "'", 0, std::string(dotted_key));
  try {
    k->set(cfg, trim(value));
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string(dotted_key) + ": " + e.what(), 0, std::string(dotted_key));
  }
}

void finalize_config(RunConfig& cfg) {
  if (!cfg.bc.empty()) {
    const auto dash = cfg.train.preset.find('-');
    cfg.train.preset = cfg.train.preset.substr(0, dash) + "-" + cfg.bc;
    cfg.bc.clear();
  }
  const auto names = preset_names();
  if (std::find(names.begin(), names.end(), cfg.train.preset) == names.end())
    throw UnknownPresetError(cfg.train.preset);
  if (cfg.train.steps > 0 && !cfg.cycles_set) {
    cfg.train.schedule.cycle_steps = {cfg.train.steps - cfg.train.schedule.extension_steps};
    cfg.cycles_set = true;
  }
  if (cfg.train.steps == 0) cfg.train.steps = cfg.train.schedule.total_steps();
  if (!(cfg.probe_dt > 0.0)) throw ConfigError("run.probe_dt must be positive", 0, "run.probe_dt");
  if (cfg.shape_points < 2) throw ConfigError("run.shape_points must be >= 2", 0, "run.shape_points");
}

RunConfig parse_config(std::string_view text, const std::vector<std::string>& overrides) {
  RunConfig cfg;
  std::string section;
  std::set<std::string> seen;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("malformed section header", line_no);
      section = std::string(trim(line.substr(1, line.size() - 2)));
      static const std::set<std::string> sections{"problem", "network", "grid", "schedule", "train", "barrier", "run"};
      if (!sections.contains(section)) throw ConfigError("unknown section [" + section + "]", line_no, section);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected key = value", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (section.empty()) throw ConfigError("key outside any section", line_no, key);
    const std::string dotted = section + "." + key;
    const KeyDef* k = find_key(dotted);
    if (!k) throw ConfigError("unknown key '" + key + "' in [" + section + "]", line_no, dotted);
    if (!seen.insert(dotted).second) throw ConfigError("duplicate key '" + key + "'", line_no, dotted);
    try {
      k->set(cfg, value);
    } catch (const InvalidArgument& e) {
      throw ConfigError(dotted + ": " + e.what(), line_no, dotted);
    }
  }
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + o + "' is not key=value", 0, o);
    apply_setting(cfg, std::string_view(o).substr(0, eq), std::string_view(o).substr(eq + 1));
  }
  finalize_config(cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), overrides);
}

std::string to_config_text(const RunConfig& cfg) {
  std::string out;
  std::string section;
  for (const auto& k : key_defs()) {
    const auto dot = k.doc.name.find('.');
    const std::string sec = k.doc.name.substr(0, dot);
    if (sec != section) {
      if (!section.empty()) out += "\n";
      out += "[" + sec + "]\n";
      section = sec;
    }
    out += k.doc.name.substr(dot + 1) + " = " + k.get(cfg) + "\n";
  }
  return out;
}

}  // namespace pinn
