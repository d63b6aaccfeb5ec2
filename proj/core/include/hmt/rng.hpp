#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace hmt {

// Deterministic random stream. The uniform/gaussian mappings are done by
// hand (not via std:: distributions) so that a given seed produces the same
// values on every standard library.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t bits() { return eng_(); }

  // [0, 1)
  double uniform() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  double gauss();

  // circularly symmetric, E|z|^2 = 1
  std::complex<double> cgauss() {
    const double re = gauss();
    const double im = gauss();
    return {re * 0x1.6a09e667f3bcdp-1, im * 0x1.6a09e667f3bcdp-1};  // 1/sqrt(2)
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

// Stream derivation: hashes the parts into the base seed one by one.
// Used to give every (experiment, point, realization) its own stream.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts);

std::uint64_t tag_hash(std::string_view tag);

}  // namespace hmt
