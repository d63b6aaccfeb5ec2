#pragma once

#include <complex>
#include <vector>

namespace hmt {

using cplx = std::complex<double>;

// Sampled complex baseband signal. t0 is the absolute time of samples[0];
// sample k sits at t0 + k*ts.
struct SampledSignal {
  std::vector<cplx> samples;
  double ts = 0.0;
  double t0 = 0.0;

  std::size_t size() const { return samples.size(); }
};

}  // namespace hmt
