#pragma once

#include <vector>

#include "dyad/common.hpp"

namespace dyad {

enum class FilterMode { Causal, ZeroPhase };

// Second-order Butterworth low-pass section, bilinear design with
// frequency prewarping. The first sample primes the delay line at steady
// state, so a constant input reproduces itself from sample one.
class ButterworthLowpass {
 public:
  ButterworthLowpass(double cutoff_hz, double sample_rate_hz);

  double step(double x);
  void reset();

  double dc_gain() const;
  double b0() const { return b0_; }
  double b1() const { return b1_; }
  double b2() const { return b2_; }
  double a1() const { return a1_; }
  double a2() const { return a2_; }

 private:
  double b0_, b1_, b2_, a1_, a2_;
  double x1_ = 0.0, x2_ = 0.0, y1_ = 0.0, y2_ = 0.0;
  bool primed_ = false;
};

// Single forward pass (streaming-safe).
std::vector<double> lowpass_causal(const std::vector<double>& x,
                                   double cutoff_hz, double sample_rate_hz);

// Forward-backward pass: squared magnitude response, no group delay.
// Offline only.
std::vector<double> lowpass_zero_phase(const std::vector<double>& x,
                                       double cutoff_hz, double sample_rate_hz);

std::vector<double> lowpass(const std::vector<double>& x, double cutoff_hz,
                            double sample_rate_hz, FilterMode mode);

}  // namespace dyad
