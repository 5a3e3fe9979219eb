// SPDX-License-Identifier: Apache-2.0
#include "cloudplan/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cloudplan {

KalmanState kf_init(double q, double r_noise) {
  if (!(q > 0.0)) throw std::invalid_argument("kalman: process-noise variance q must be > 0");
  if (!(r_noise > 0.0)) throw std::invalid_argument("kalman: measurement-noise variance r must be > 0");
  KalmanState s;
  s.q = q;
  s.r_noise = r_noise;
  return s;
}

KalmanStep kf_step(const KalmanState& state, double z) {
  if (!(z >= 0.0)) throw std::invalid_argument("kalman: measurement must be >= 0");
  KalmanStep out{state, 0.0, 0.0};
  auto& s = out.state;
  if (!s.initialized) {
    s.x_hat = z;
    s.p_cov = s.r_noise;
    s.initialized = true;
    out.prediction = z;
    out.gain = 1.0;
    return out;
  }
  const double p_prior = s.p_cov + s.q;
  const double gain = p_prior / (p_prior + s.r_noise);
  s.x_hat = s.x_hat + gain * (z - s.x_hat);
  s.p_cov = (1.0 - gain) * p_prior;
  out.prediction = s.x_hat;
  out.gain = gain;
  return out;
}

std::int64_t predict_capacity(const KalmanState& state, double headroom) {
  if (!state.initialized) throw std::logic_error("predict_capacity: filter has not seen a measurement");
  if (!(headroom >= 1.0)) throw std::invalid_argument("predict_capacity: headroom must be >= 1");
  return static_cast<std::int64_t>(std::ceil(std::max(state.x_hat, 0.0) * headroom));
}

KalmanParams default_kalman_params(std::span<const std::int64_t> samples) {
  const auto n = std::min<std::size_t>(samples.size(), 20);
  double var = 0.0;
  if (n > 1) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += static_cast<double>(samples[i]);
    mean /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double d = static_cast<double>(samples[i]) - mean;
      var += d * d;
    }
    var /= static_cast<double>(n - 1);
  }
  var = std::max(var, 1e-6);
  return KalmanParams{0.05 * var, var};
}

KalmanForecaster::KalmanForecaster(double q, double r_noise, double headroom)
    : state_(kf_init(q, r_noise)), headroom_(headroom) {
  if (!(headroom >= 1.0)) throw std::invalid_argument("kalman: headroom must be >= 1");
}

void KalmanForecaster::observe(std::int64_t measured) { state_ = kf_step(state_, static_cast<double>(measured)).state; }

std::int64_t KalmanForecaster::forecast() const {
  return state_.initialized ? predict_capacity(state_, headroom_) : 0;
}

}  // namespace cloudplan
