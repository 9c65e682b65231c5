#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pinn/errors.hpp"
#include "pinn//checkpoint.hpp"
#include "pinn/verify.hpp"

using namespace pinn;

TEST_CASE("Richardson oracles on known functions") {
  CHECK(richardson_first([](double x) { return std::sin(x); }, 0.4) == doctest::Approx(std::cos(0.4)).epsilon(1e-12));
  CHECK(richardson_second([](double x) { return std::exp(x); }, 0.3) == doctest::Approx(std::exp(0.3)).epsilon(1e-10));
  CHECK(relative_error(1.0, 1.0) == 0.0);
  CHECK(relative_error(1e-20, 0.0, 1e-12) == doctest::Approx(1e-8));
}

TEST_CASE("every built-in check passes on a fresh build") {
  std::vector<CheckResult> all;
  for (const auto& suite : {verify_oracle(), verify_gradients(), verify_schedule(), verify_checkpoint()})
    all.insert(all.end(), suite.begin(), suite.end());
  std::ostringstream out;
  CHECK(print_report(all, out));
  for (const auto& r : all) {
    CAPTURE(r.name);
    CHECK(r.passed);
  }
  for (const auto& r : verify_gradients()) CHECK(r.measured < 1e-5);
}

TEST_CASE("a corrupted checkpoint is reported") {
  Checkpoint c;
  c.widths = {2, 3, 1};
  c.params = init_params(c.widths, {});
  const auto path = std::filesystem::temp_directory_path() / "pinn_test_verify.ckpt";
  auto bytes = encode_checkpoint(c);
  bytes[bytes.size() / 2] ^= 0xff;
  {
    std::ofstream f(path, std::ios::binary);
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  }
  bool failed = false;
  for (const auto& r : verify_checkpoint(path)) failed |= !r.passed;
  CHECK(failed);
  std::filesystem::remove(path);
}
