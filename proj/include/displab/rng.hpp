#pragma once

// Counter-based random streams (Philox4x32-10) keyed by a seed and a path of
// integers such as (experiment, trial, site). A draw depends only on the key
// and its position in the stream, so results do not depend on how trials are
// scheduled across threads.

#include <array>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <vector>

namespace displab {

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::vector<std::uint64_t> path = {});

  // Independent sub-stream with `id` appended to the path.
  RngStream child(std::uint64_t id) const;
  RngStream child(std::initializer_list<std::uint64_t> ids) const;

  std::uint64_t seed() const { return seed_; }
  const std::vector<std::uint64_t>& path() const { return path_; }

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1]; safe as a log argument.
  double uniform_pos() { return 1.0 - uniform(); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  bool coin() { return (next_u64() >> 63) != 0; }
  // Standard normal via Box-Muller; second variate is cached.
  double normal();

 private:
  void refill();

  std::uint64_t seed_;
  std::vector<std::uint64_t> path_;
  std::array<std::uint32_t, 2> key_{};
  std::uint64_t domain_ = 0;  // upper half of the Philox counter
  std::uint64_t block_ = 0;   // lower half of the Philox counter
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
  std::optional<double> spare_normal_;
};

// One Philox4x32 block with 10 rounds; exposed for known-answer tests.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

}  // namespace displab
