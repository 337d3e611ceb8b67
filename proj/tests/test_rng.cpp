#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "displab/rng.hpp"

using displab::RngStream;

TEST_CASE("philox4x32-10 known answers") {
  using A4 = std::array<std::uint32_t, 4>;
  CHECK(displab::philox4x32_10({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(displab::philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
}

TEST_CASE("same seed and path replay the same draws") {
  RngStream a(42, {1, 2, 3}), b(42, {1, 2, 3});
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
  RngStream c(42, {1, 2, 3}), d(42, {1, 2, 3});
  for (int i = 0; i < 101; ++i) CHECK(c.normal() == d.normal());
}

TEST_CASE("child streams") {
  const RngStream root(7);
  CHECK(root.child(3).path() == std::vector<std::uint64_t>{3});
  CHECK(root.child({3, 4}).path() == root.child(3).child(4).path());
  RngStream x = root.child({3, 4}), y = root.child(3).child(4);
  CHECK(x.next_u64() == y.next_u64());

  std::set<std::uint64_t> firsts;
  for (std::uint64_t i = 0; i < 1000; ++i) firsts.insert(root.child(i).next_u64());
  CHECK(firsts.size() == 1000);
  RngStream p = RngStream(7).child(1), q = RngStream(8).child(1);
  CHECK(p.next_u64() != q.next_u64());
}

TEST_CASE("uniform moments") {
  RngStream rng(1);
  const int m = 200000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < m; ++i) {
    const double u = rng.uniform();
    CHECK_UNARY(u >= 0.0);
    CHECK_UNARY(u < 1.0);
    s += u;
    s2 += u * u;
  }
  const double mean = s / m, var = s2 / m - mean * mean;
  CHECK(std::abs(mean - 0.5) < 3.0 * std::sqrt(1.0 / 12.0 / m) + 1e-12);
  CHECK(var == doctest::Approx(1.0 / 12.0).epsilon(0.01));
}

TEST_CASE("normal moments") {
  RngStream rng(2);
  const int m = 200000;
  double s = 0.0, s2 = 0.0, s4 = 0.0;
  for (int i = 0; i < m; ++i) {
    const double z = rng.normal();
    s += z;
    s2 += z * z;
    s4 += z * z * z * z;
  }
  CHECK(std::abs(s / m) < 3.0 / std::sqrt(double(m)));
  CHECK(std::abs(s2 / m - 1.0) < 3.0 * std::sqrt(2.0 / m));
  CHECK(std::abs(s4 / m - 3.0) < 3.0 * std::sqrt(96.0 / m));
}

TEST_CASE("below is unbiased and in range") {
  RngStream rng(3);
  std::array<int, 7> counts{};
  const int m = 70000;
  for (int i = 0; i < m; ++i) {
    const auto v = rng.below(7);
    REQUIRE(v < 7);
    ++counts[v];
  }
  for (int c : counts) CHECK(std::abs(c - m / 7.0) < 4.0 * std::sqrt(m / 7.0));
  CHECK(rng.below(1) == 0);
}
