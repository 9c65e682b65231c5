#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pinn/network.hpp"

namespace pinn {

/// Binary network checkpoint; all integers and doubles little-endian.
///
///   offset  field
///   0       magic "PINNCKP1" (8 bytes)
///   8       u32 number of widths n, then n x u32 widths
///           u32 byte length + activation name (UTF-8, "tanh")
///           u32 byte length + initializer name ("he_uniform" | "glorot_uniform")
///           u64 initializer seed
///           u64 training step
///           u64 parameter count P (must equal param_count(widths))
///           P x f64 parameters in the MlpNetwork flat layout
///   end-8   u64 FNV-1a hash of every preceding byte
struct Checkpoint {
  std::vector<int> widths;
  std::string activation = std::string(MlpNetwork::kActivation);
  InitKind init_kind = InitKind::he_uniform;
  std::uint64_t seed = 0;
  std::uint64_t step = 0;
  std::vector<double> params;

  MlpNetwork network() const { return MlpNetwork(widths, params); }
};

std::vector<std::uint8_t> encode_checkpoint(const Checkpoint& ckpt);
/// Throws CheckpointError on a bad magic, truncation, hash mismatch or
/// inconsistent parameter count.
Checkpoint decode_checkpoint(const std::vector<std::uint8_t>& bytes);

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace pinn
