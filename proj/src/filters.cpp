#include "dyad/filters.hpp"

#include <algorithm>
#include <cmath>

namespace dyad {

ButterworthLowpass::ButterworthLowpass(double cutoff_hz, double sample_rate_hz) {
  if (!(cutoff_hz > 0.0) || !(sample_rate_hz > 0.0) ||
      cutoff_hz >= sample_rate_hz / 2.0) {
    throw DataError("lowpass: cutoff must lie in (0, sample_rate/2)");
  }
  const double k = std::tan(M_PI * cutoff_hz / sample_rate_hz);
  const double q = 1.0 / std::sqrt(2.0);
  const double norm = 1.0 / (1.0 + k / q + k * k);
  b0_ = k * k * norm;
  b1_ = 2.0 * b0_;
  b2_ = b0_;
  a1_ = 2.0 * (k * k - 1.0) * norm;
  a2_ = (1.0 - k / q + k * k) * norm;
}

double ButterworthLowpass::dc_gain() const {
  return (b0_ + b1_ + b2_) / (1.0 + a1_ + a2_);
}

void ButterworthLowpass::reset() {
  x1_ = x2_ = y1_ = y2_ = 0.0;
  primed_ = false;
}

double ButterworthLowpass::step(double x) {
  if (!primed_) {
    x1_ = x2_ = x;
    y1_ = y2_ = x * dc_gain();
    primed_ = true;
  }
  const double y = b0_ * x + b1_ * x1_ + b2_ * x2_ - a1_ * y1_ - a2_ * y2_;
  x2_ = x1_;
  x1_ = x;
  y2_ = y1_;
  y1_ = y;
  return y;
}

std::vector<double> lowpass_causal(const std::vector<double>& x,
                                   double cutoff_hz, double sample_rate_hz) {
  ButterworthLowpass f(cutoff_hz, sample_rate_hz);
  std::vector<double> y;
  y.reserve(x.size());
  for (double v : x) y.push_back(f.step(v));
  return y;
}

std::vector<double> lowpass_zero_phase(const std::vector<double>& x,
                                       double cutoff_hz, double sample_rate_hz) {
  std::vector<double> y = lowpass_causal(x, cutoff_hz, sample_rate_hz);
  std::reverse(y.begin(), y.end());
  y = lowpass_causal(y, cutoff_hz, sample_rate_hz);
  std::reverse(y.begin(), y.end());
  return y;
}

std::vector<double> lowpass(const std::vector<double>& x, double cutoff_hz,
                            double sample_rate_hz, FilterMode mode) {
  return mode == FilterMode::Causal
             ? lowpass_causal(x, cutoff_hz, sample_rate_hz)
             : lowpass_zero_phase(x, cutoff_hz, sample_rate_hz);
}

}  // namespace dyad
