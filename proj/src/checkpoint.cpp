#include "pinn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "pinn/errors.hpp"

namespace pinn {

namespace {

constexpr char kMagic[8] = {'P', 'I', 'N', 'N', 'C', 'K', 'P', '1'};

std::uint64_t fnv1a(const std::uint8_t* data, std::size_t n) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= data[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

class Writer {
 public:
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) bytes.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    bytes.insert(bytes.end(), s.begin(), s.end());
  }
  std::vector<std::uint8_t> bytes;
};

class Reader {
 public:
  Reader(const std::uint8_t* data, std::size_t n) : data_(data), n_(n) {}
  void need(std::size_t k) const {
    if (pos_ + k > n_) throw CheckpointError("checkpoint is truncated");
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(data_[pos_++]) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(data_[pos_++]) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    const std::uint32_t len = u32();
    need(len);
    std::string s(reinterpret_cast<const char*>(data_ + pos_), len);
    pos_ += len;
    return s;
  }
  std::size_t pos() const { return pos_; }

 private:
  const std::uint8_t* data_;
  std::size_t n_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_checkpoint(const Checkpoint& ckpt) {
  if (ckpt.params.size() != param_count(ckpt.widths)) throw InvalidArgument("checkpoint parameter count mismatch");
  Writer w;
  w.bytes.insert(w.bytes.end(), std::begin(kMagic), std::end(kMagic));
  w.u32(static_cast<std::uint32_t>(ckpt.widths.size()));
  for (int width : ckpt.widths) w.u32(static_cast<std::uint32_t>(width));
  w.str(ckpt.activation);
  w.str(std::string(to_string(ckpt.init_kind)));
  w.u64(ckpt.seed);
  w.u64(ckpt.step);
  w.u64(ckpt.params.size());
  for (double p : ckpt.params) w.f64(p);
  w.u64(fnv1a(w.bytes.data(), w.bytes.size()));
  return std::move(w.bytes);
}

Checkpoint decode_checkpoint(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < sizeof(kMagic) + 8 || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw CheckpointError("not a checkpoint (bad magic)");
  }
  const std::size_t body = bytes.size() - 8;
  Reader tail(bytes.data() + body, 8);
  if (tail.u64() != fnv1a(bytes.data(), body)) throw CheckpointError("checkpoint hash mismatch (corrupted file)");

  Reader r(bytes.data() + sizeof(kMagic), body - sizeof(kMagic));
  Checkpoint ckpt;
  const std::uint32_t n_widths = r.u32();
  if (n_widths < 2 || n_widths > 1024) throw CheckpointError("implausible layer count");
  for (std::uint32_t i = 0; i < n_widths; ++i) ckpt.widths.push_back(static_cast<int>(r.u32()));
  ckpt.activation = r.str();
  if (ckpt.activation != MlpNetwork::kActivation) throw CheckpointError("unsupported activation " + ckpt.activation);
  try {
    ckpt.init_kind = parse_init_kind(r.str());
  } catch (const InvalidArgument& e) {
    throw CheckpointError(e.what());
  }
  ckpt.seed = r.u64();
  ckpt.step = r.u64();
  const std::uint64_t n_params = r.u64();
  std::size_t expected = 0;
  try {
    expected = param_count(ckpt.widths);
  } catch (const InvalidArgument& e) {
    throw CheckpointError(e.what());
  }
  if (n_params != expected) throw CheckpointError("parameter count does not match widths");
  ckpt.params.resize(n_params);
  for (auto& p : ckpt.params) p = r.f64();
  if (r.pos() != body - sizeof(kMagic)) throw CheckpointError("trailing bytes in checkpoint");
  return ckpt;
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  const auto bytes = encode_checkpoint(ckpt);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CheckpointError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw CheckpointError("write failed: " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_checkpoint(bytes);
}

}  // namespace pinn
