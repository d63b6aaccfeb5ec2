#include "hmt/lattice.hpp"

#include <cmath>
#include <stdexcept>

#include "hmt/rng.hpp"

namespace hmt {

namespace {

void check_spec(const LatticeSpec& spec) {
  if (spec.T <= 0.0 || spec.F <= 0.0) throw std::invalid_argument("lattice: T and F must be positive");
  if (spec.M < 1 || spec.N < 1) throw std::invalid_argument("lattice: M and N must be at least 1");
}

}  // namespace

double lattice_time_center(const LatticeSpec& spec, int coset, int m) {
  return m * spec.T + (coset == 2 ? 0.5 * spec.T : 0.0);
}

double lattice_freq_center(const LatticeSpec& spec, int coset, int n) {
  return n * spec.F + (coset == 2 ? 0.5 * spec.F : 0.0);
}

std::vector<LatticePoint> lattice_points(const LatticeSpec& spec) {
  check_spec(spec);
  std::vector<LatticePoint> out;
  out.reserve(static_cast<std::size_t>(2 * spec.M * spec.N));
  for (int coset = 1; coset <= 2; ++coset)
    for (int m = 0; m < spec.M; ++m)
      for (int n = 0; n < spec.N; ++n)
        out.push_back({coset, m, n, lattice_time_center(spec, coset, m),
                       lattice_freq_center(spec, coset, n)});
  return out;
}

double density(const LatticeSpec& spec) {
  check_spec(spec);
  return 2.0 / (spec.T * spec.F);
}

int bits_per_symbol(Constellation c) {
  switch (c) {
    case Constellation::QPSK:
      return 2;
  }
  throw std::invalid_argument("bits_per_symbol: unknown constellation");
}

cplx& SymbolGrid::at(int coset, int m, int n) {
  auto& v = coset == 2 ? coset2 : coset1;
  return v[static_cast<std::size_t>(m) * N + n];
}

const cplx& SymbolGrid::at(int coset, int m, int n) const {
  const auto& v = coset == 2 ? coset2 : coset1;
  return v[static_cast<std::size_t>(m) * N + n];
}

SymbolGrid zero_grid(const LatticeSpec& spec, Constellation c, double symbol_power) {
  check_spec(spec);
  SymbolGrid g;
  g.M = spec.M;
  g.N = spec.N;
  g.constellation = c;
  g.symbol_power = symbol_power;
  g.coset1.assign(static_cast<std::size_t>(spec.M) * spec.N, cplx{0.0, 0.0});
  g.coset2.assign(static_cast<std::size_t>(spec.M) * spec.N, cplx{0.0, 0.0});
  return g;
}

SymbolGrid random_grid(const LatticeSpec& spec, Constellation c, double symbol_power,
                       std::uint64_t rng_seed) {
  SymbolGrid g = zero_grid(spec, c, symbol_power);
  RandomSource rng(rng_seed);
  const double amp = std::sqrt(symbol_power * 0.5);  // per-quadrature amplitude
  auto draw = [&](cplx& slot) {
    const std::uint64_t b = rng.bits();
    slot = cplx{(b & 1) ? amp : -amp, (b & 2) ? amp : -amp};
  };
  for (auto& s : g.coset1) draw(s);
  for (auto& s : g.coset2) draw(s);
  return g;
}

}  // namespace hmt
