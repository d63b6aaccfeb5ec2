#pragma once

#include <cstdint>
#include <vector>

#include "hmt/signal.hpp"

namespace hmt {

// Hexagonal TF lattice as two rectangular cosets. Coset 1 sits at
// (mT, nF); coset 2 is shifted by (T/2, F/2).
struct LatticeSpec {
  double T = 0.0;
  double F = 0.0;
  int M = 0;  // time indices per coset
  int N = 0;  // frequency indices per coset
};

struct LatticePoint {
  int coset = 1;  // 1 or 2
  int m = 0;
  int n = 0;
  double t_center = 0.0;
  double f_center = 0.0;
};

std::vector<LatticePoint> lattice_points(const LatticeSpec& spec);

double lattice_time_center(const LatticeSpec& spec, int coset, int m);
double lattice_freq_center(const LatticeSpec& spec, int coset, int n);

// Signaling density 2/(T*F): two cosets of density 1/(TF) each.
double density(const LatticeSpec& spec);

enum class Constellation { QPSK };

int bits_per_symbol(Constellation c);

struct SymbolGrid {
  int M = 0;
  int N = 0;
  std::vector<cplx> coset1;  // row-major, index m*N + n
  std::vector<cplx> coset2;
  Constellation constellation = Constellation::QPSK;
  double symbol_power = 1.0;

  cplx& at(int coset, int m, int n);
  const cplx& at(int coset, int m, int n) const;
};

SymbolGrid zero_grid(const LatticeSpec& spec, Constellation c, double symbol_power);

// i.i.d. unit-constellation symbols scaled to the requested average power.
SymbolGrid random_grid(const LatticeSpec& spec, Constellation c, double symbol_power,
                       std::uint64_t rng_seed);

}  // namespace hmt
