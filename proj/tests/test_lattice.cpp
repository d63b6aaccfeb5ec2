#include <cmath>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "hmt/lattice.hpp"

using namespace hmt;

namespace {
const LatticeSpec kIv{1e-4, 2.5e4, 20, 40};
}

TEST_CASE("lattice centers: coset 2 sits at the half step") {
  CHECK(lattice_time_center(kIv, 1, 0) == 0.0);
  CHECK(lattice_time_center(kIv, 1, 7) == 7e-4);
  CHECK(lattice_time_center(kIv, 2, 0) == 0.5e-4);
  CHECK(lattice_time_center(kIv, 2, 7) == 7.5e-4);
  CHECK(lattice_freq_center(kIv, 1, 3) == 7.5e4);
  CHECK(lattice_freq_center(kIv, 2, 3) == doctest::Approx(8.75e4).epsilon(1e-15));
}

TEST_CASE("lattice_points enumerates both cosets") {
  const auto pts = lattice_points(kIv);
  REQUIRE(pts.size() == 2u * 20u * 40u);
  std::set<std::pair<double, double>> seen;
  for (const auto& p : pts) {
    CHECK((p.coset == 1 || p.coset == 2));
    CHECK(p.t_center == lattice_time_center(kIv, p.coset, p.m));
    CHECK(p.f_center == lattice_freq_center(kIv, p.coset, p.n));
    seen.insert({p.t_center, p.f_center});
  }
  CHECK(seen.size() == pts.size());  // no duplicate TF positions

  CHECK_THROWS_AS(lattice_points({0.0, 2.5e4, 20, 40}), std::invalid_argument);
  CHECK_THROWS_AS(lattice_points({1e-4, 2.5e4, 0, 40}), std::invalid_argument);
}

TEST_CASE("signaling density is 2/(TF)") {
  CHECK(density(kIv) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(density({2e-3, 1e3, 4, 4}) == doctest::Approx(1e-3 * 1e3).epsilon(1e-15));
  CHECK(density({0.5, 4.0, 2, 2}) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("grids: zero, indexing, QPSK statistics") {
  CHECK(bits_per_symbol(Constellation::QPSK) == 2);

  auto z = zero_grid(kIv, Constellation::QPSK, 1.0);
  CHECK(z.M == 20);
  CHECK(z.N == 40);
  for (const auto& c : z.coset1) CHECK(c == cplx{0.0, 0.0});
  for (const auto& c : z.coset2) CHECK(c == cplx{0.0, 0.0});

  z.at(2, 3, 5) = cplx{1.0, -1.0};
  CHECK(z.coset2[3 * 40 + 5] == cplx{1.0, -1.0});
  CHECK(z.coset1[3 * 40 + 5] == cplx{0.0, 0.0});

  const double power = 2.0;
  const auto g = random_grid(kIv, Constellation::QPSK, power, 99);
  const double amp = std::sqrt(power / 2.0);
  long plus_re = 0, total = 0;
  for (const auto* coset : {&g.coset1, &g.coset2})
    for (const auto& c : *coset) {
      CHECK(std::abs(c.real()) == doctest::Approx(amp).epsilon(1e-12));
      CHECK(std::abs(c.imag()) == doctest::Approx(amp).epsilon(1e-12));
      plus_re += c.real() > 0.0 ? 1 : 0;
      ++total;
    }
  // i.i.d. equiprobable bits; 1600 symbols keeps the sign split near half
  CHECK(std::abs(plus_re - total / 2) < 5 * std::sqrt(total / 4.0));
}

TEST_CASE("random_grid is seed deterministic") {
  const auto a = random_grid(kIv, Constellation::QPSK, 1.0, 4242);
  const auto b = random_grid(kIv, Constellation::QPSK, 1.0, 4242);
  const auto c = random_grid(kIv, Constellation::QPSK, 1.0, 4243);
  CHECK(a.coset1 == b.coset1);
  CHECK(a.coset2 == b.coset2);
  CHECK(a.coset1 != c.coset1);
}
