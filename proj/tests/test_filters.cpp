#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "dyad/filters.hpp"

using namespace dyad;

namespace {

// RMS gain of the zero-phase filter at one frequency, measured on a long
// sine with the edges trimmed.
double measured_gain(double f_hz, double fs, double fc) {
  const int n = 4000;
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = std::sin(2.0 * M_PI * f_hz * i / fs);
  std::vector<double> y = lowpass_zero_phase(x, fc, fs);
  double num = 0, den = 0;
  for (int i = 500; i < n - 500; ++i) {
    num += y[i] * y[i];
    den += x[i] * x[i];
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("coefficients match the bilinear design at fc = fs/8") {
  // fs=100, fc=12.5: the analytic design lands on round numbers
  ButterworthLowpass f(12.5, 100.0);
  CHECK(f.b0() == doctest::Approx(0.09763107293781749).epsilon(1e-12));
  CHECK(f.b1() == doctest::Approx(0.19526214587563498).epsilon(1e-12));
  CHECK(f.b2() == doctest::Approx(0.09763107293781749).epsilon(1e-12));
  CHECK(f.a1() == doctest::Approx(-0.9428090415820632).epsilon(1e-12));
  CHECK(f.a2() == doctest::Approx(0.3333333333333332).epsilon(1e-10));
}

TEST_CASE("dc gain is exactly the coefficient sum ratio") {
  for (double fc : {2.0, 8.0, 12.5, 20.0}) {
    ButterworthLowpass f(fc, 200.0);
    CHECK(std::abs(f.dc_gain() - 1.0) <= 1e-6);
  }
}

TEST_CASE("a constant signal passes through unchanged from the first sample") {
  std::vector<double> x(200, 3.25);
  for (auto mode : {FilterMode::Causal, FilterMode::ZeroPhase}) {
    std::vector<double> y = lowpass(x, 10.0, 100.0, mode);
    REQUIRE(y.size() == x.size());
    for (double v : y) CHECK(v == doctest::Approx(3.25).epsilon(1e-9));
  }
}

TEST_CASE("zero-phase stopband: at least 20 dB down at twice the cutoff") {
  double g = measured_gain(25.0, 100.0, 12.5);
  CHECK(g < std::pow(10.0, -20.0 / 20.0));
  // squared single-pass magnitude: |H|^2 = 0.0286 at 2 fc
  CHECK(g == doctest::Approx(0.028595479208968325).epsilon(0.02));
}

TEST_CASE("passband survives") {
  CHECK(measured_gain(1.0, 100.0, 12.5) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("zero phase: filtering a symmetric pulse keeps its center") {
  const int n = 801;
  std::vector<double> x(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double d = (i - 400) / 30.0;
    x[i] = std::exp(-0.5 * d * d);
  }
  std::vector<double> y = lowpass_zero_phase(x, 5.0, 100.0);
  // output must stay symmetric about the same sample
  for (int k = 1; k < 300; ++k) {
    CHECK(std::abs(y[400 + k] - y[400 - k]) < 1e-9);
  }
  int argmax = 0;
  for (int i = 0; i < n; ++i) {
    if (y[i] > y[argmax]) argmax = i;
  }
  CHECK(argmax == 400);
}

TEST_CASE("causal filtering delays, zero-phase does not") {
  const int n = 600;
  std::vector<double> x(n, 0.0);
  for (int i = 300; i < n; ++i) x[i] = 1.0;
  std::vector<double> causal = lowpass_causal(x, 5.0, 100.0);
  std::vector<double> zp = lowpass_zero_phase(x, 5.0, 100.0);
  auto cross = [](const std::vector<double>& y) {
    for (size_t i = 0; i < y.size(); ++i) {
      if (y[i] >= 0.5) return static_cast<int>(i);
    }
    return -1;
  };
  CHECK(cross(causal) > 300);
  CHECK(cross(zp) <= 300);
}

TEST_CASE("white noise comes out with reduced variance") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g;
  std::vector<double> x(5000);
  for (double& v : x) v = g(rng);
  std::vector<double> y = lowpass_zero_phase(x, 5.0, 200.0);
  double vx = 0, vy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    vx += x[i] * x[i];
    vy += y[i] * y[i];
  }
  CHECK(vy < 0.1 * vx);
}

TEST_CASE("invalid design parameters are rejected") {
  CHECK_THROWS(ButterworthLowpass(0.0, 100.0));
  CHECK_THROWS(ButterworthLowpass(60.0, 100.0));  // above Nyquist
  CHECK_THROWS(ButterworthLowpass(10.0, 0.0));
}
