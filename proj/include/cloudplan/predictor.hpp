// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>

namespace cloudplan {

// Scalar local-level (random walk plus noise) Kalman filter state.
struct KalmanState {
  double x_hat = 0.0;    // level estimate, demand units
  double p_cov = 0.0;    // estimate variance
  double q = 1.0;        // process-noise variance
  double r_noise = 1.0;  // measurement-noise variance
  bool initialized = false;
};

struct KalmanStep {
  KalmanState state;
  double prediction = 0.0;
  double gain = 0.0;
};

// Throws std::invalid_argument unless q > 0 and r_noise > 0.
KalmanState kf_init(double q, double r_noise);

// One predict/update cycle. An uninitialized state is seeded with the
// measurement (x_hat = z, p_cov = r_noise, gain reported as 1). The returned
// prediction is the filtered level, which is also the one-step forecast.
KalmanStep kf_step(const KalmanState& state, double z);

// ceil(max(x_hat, 0) * headroom). Throws std::logic_error if uninitialized and
// std::invalid_argument if headroom < 1.
std::int64_t predict_capacity(const KalmanState& state, double headroom);

struct KalmanParams {
  double q = 0.0;
  double r_noise = 0.0;
};

// q = 0.05 * var, r = var over the first (up to) 20 samples; the variance is
// floored at 1e-6 so a flat prefix still yields a valid filter.
KalmanParams default_kalman_params(std::span<const std::int64_t> samples);

// Source of r_p for the short-term planner. observe() is fed each measured
// demand in order; forecast() returns the capacity-demand expected for the
// next interval.
class DemandForecaster {
 public:
  virtual ~DemandForecaster() = default;
  virtual void observe(std::int64_t measured) = 0;
  virtual std::int64_t forecast() const = 0;
  virtual std::string name() const = 0;
};

class KalmanForecaster final : public DemandForecaster {
 public:
  KalmanForecaster(double q, double r_noise, double headroom);

  void observe(std::int64_t measured) override;
  // 0 before the first observation.
  std::int64_t forecast() const override;
  std::string name() const override { return "kalman"; }

  const KalmanState& state() const { return state_; }

 private:
  KalmanState state_;
  double headroom_;
};

// Forecast equals the last measurement.
class ReactiveForecaster final : public DemandForecaster {
 public:
  void observe(std::int64_t measured) override { last_ = measured; }
  std::int64_t forecast() const override { return last_; }
  std::string name() const override { return "reactive"; }

 private:
  std::int64_t last_ = 0;
};

// Reads the next interval's demand from the trace. Bounds achievable cost.
class OracleForecaster final : public DemandForecaster {
 public:
  explicit OracleForecaster(std::span<const std::int64_t> trace) : trace_(trace) {}

  void observe(std::int64_t) override { ++seen_; }
  // 0 once the trace is exhausted.
  std::int64_t forecast() const override { return seen_ < trace_.size() ? trace_[seen_] : 0; }
  std::string name() const override { return "oracle"; }

 private:
  std::span<const std::int64_t> trace_;
  std::size_t seen_ = 0;
};

}  // namespace cloudplan
