#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "dyad/features.hpp"

// Compares the parallel per-tick feature kernel against the serial
// reference on a synthetic ten-minute session.

using namespace dyad;

namespace {

std::vector<FusedState> synth_states(int n, double dt) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<FusedState> states(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    FusedState& s = states[static_cast<size_t>(i)];
    s.t = i * dt;
    double yaw = 0.3 * std::sin(0.01 * i);
    s.pose.position = Vec3(0.002 * i, 0.001 * i, 0.0);
    s.pose.orientation = yaw_quat(yaw);
    s.twist.linear = Vec3(0.4 + 0.05 * g(rng), 0.2 + 0.05 * g(rng), 0.0);
    s.twist.angular = Vec3(0.0, 0.0, 0.05 * g(rng));
    s.f1 = Vec3(6.0 + g(rng), 2.0 + g(rng), 0.0);
    s.f2 = Vec3(4.0 + g(rng), -1.0 + g(rng), 0.0);
    s.v1 = s.twist.linear + Vec3(0.02 * g(rng), 0.02 * g(rng), 0.0);
    s.v2 = s.twist.linear + Vec3(0.02 * g(rng), 0.02 * g(rng), 0.0);
  }
  return states;
}

template <typename F>
double time_ms(F&& body, int reps) {
  auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) body();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

}  // namespace

int main() {
  const int n = 600 * 200;
  const double dt = 1.0 / 200.0;
  GoalLayout layout = GoalLayout::standard_three();
  QuadrantDeadband deadband;
  std::vector<FusedState> states = synth_states(n, dt);

  std::vector<PowerSample> serial;
  std::vector<PowerSample> parallel;
  double ms_serial = time_ms([&]() { serial = power_series_serial(states, layout, deadband); }, 5);
  double ms_parallel = time_ms([&]() { parallel = power_series(states, layout, deadband); }, 5);

  double max_diff = 0.0;
  for (size_t i = 0; i < serial.size(); ++i) {
    max_diff = std::max(max_diff, std::abs(serial[i].p_sum_w - parallel[i].p_sum_w));
    for (int k = 0; k < 2; ++k) {
      const auto& a = k == 0 ? serial[i].agent1 : serial[i].agent2;
      const auto& b = k == 0 ? parallel[i].agent1 : parallel[i].agent2;
      for (size_t g = 0; g < a.size(); ++g) {
        max_diff = std::max(max_diff, std::abs(a[g].p_proj_w - b[g].p_proj_w));
      }
    }
  }

  std::printf("samples            %d\n", n);
  std::printf("serial             %.3f ms\n", ms_serial);
  std::printf("parallel           %.3f ms\n", ms_parallel);
  std::printf("speedup            %.2fx\n", ms_serial / ms_parallel);
  std::printf("max abs difference %.3g\n", max_diff);
  return max_diff == 0.0 ? 0 : 1;
}
