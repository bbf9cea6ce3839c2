#include "sfo/random.hpp"

#include <doctest.h>

#include <array>
#include <cmath>

using namespace sfo;

TEST_CASE("streams are reproducible from the seed") {
  RandomStream a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  RandomStream c(43);
  CHECK(RandomStream(42).next_u64() != c.next_u64());
}

TEST_CASE("split does not advance the parent and yields distinct children") {
  RandomStream p(7);
  const auto before = p.counter();
  RandomStream c1 = p.split(1), c2 = p.split(2), c1b = p.split(1);
  CHECK(p.counter() == before);
  CHECK(c1.next_u64() == c1b.next_u64());
  CHECK(c1.next_u64() != c2.next_u64());
}

TEST_CASE("uniform lies in [0, 1) with the right mean") {
  RandomStream r(1);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / n - 0.5) < 0.005);
}

TEST_CASE("normal variates have unit variance") {
  RandomStream r(3);
  double s = 0.0, s2 = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    s += z;
    s2 += z * z;
  }
  CHECK(std::abs(s / n) < 0.02);
  CHECK(std::abs(s2 / n - 1.0) < 0.02);
}

TEST_CASE("index frequencies match the uniform law") {
  RandomStream r(5);
  std::array<int, 4> counts{};
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[r.index(4)];
  for (int c : counts) {
    CHECK(c / double(n) >= 0.24);
    CHECK(c / double(n) <= 0.26);
  }
  CHECK(r.index(1) == 0);
}

TEST_CASE("unit vectors have norm one") {
  RandomStream r(9);
  for (int i = 0; i < 50; ++i) CHECK(std::abs(r.unit_vector(5).norm() - 1.0) < 1e-12);
}
