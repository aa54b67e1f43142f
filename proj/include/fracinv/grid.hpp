#pragma once

#include <cmath>

#include "fracinv/error.hpp"
#include "fracinv/types.hpp"

namespace fracinv {

/// Uniform grid on [0, l] with M interior nodes: x_i = i l / (M + 1), i = 0..M+1.
template <typename Scalar = double>
class SpaceGrid {
 public:
  SpaceGrid(Scalar length, Index interior) : length_(length), interior_(interior) {
    if (!(length > Scalar(0)) || !std::isfinite(static_cast<double>(length))) {
      throw ConfigError("space grid: length l must be positive");
    }
    if (interior < 3) throw ConfigError("space grid: M must be at least 3");
  }

  Scalar length() const { return length_; }
  Index interior() const { return interior_; }
  Index size() const { return interior_ + 2; }
  Scalar spacing() const { return length_ / Scalar(interior_ + 1); }

  Scalar node(Index i) const {
    return i == interior_ + 1 ? length_ : Scalar(i) * spacing();
  }
  /// x_{i+1/2}, i = 0..M.
  Scalar half_node(Index i) const { return (Scalar(i) + Scalar(0.5)) * spacing(); }

  VectorX<Scalar> nodes() const {
    VectorX<Scalar> x(size());
    for (Index i = 0; i < size(); ++i) x(i) = node(i);
    return x;
  }
  VectorX<Scalar> half_nodes() const {
    VectorX<Scalar> x(interior_ + 1);
    for (Index i = 0; i <= interior_; ++i) x(i) = half_node(i);
    return x;
  }

  friend bool operator==(const SpaceGrid& a, const SpaceGrid& b) {
    return a.length_ == b.length_ && a.interior_ == b.interior_;
  }

 private:
  Scalar length_;
  Index interior_;
};

/// Uniform time grid t_k = k T / K, k = 0..K.
template <typename Scalar = double>
class TimeGrid {
 public:
  TimeGrid(Scalar horizon, Index steps) : horizon_(horizon), steps_(steps) {
    if (!(horizon > Scalar(0)) || !std::isfinite(static_cast<double>(horizon))) {
      throw ConfigError("time grid: horizon T must be positive");
    }
    if (steps < 1) throw ConfigError("time grid: K must be at least 1");
  }

  Scalar horizon() const { return horizon_; }
  Index steps() const { return steps_; }
  Index size() const { return steps_ + 1; }
  Scalar step() const { return horizon_ / Scalar(steps_); }
  Scalar node(Index k) const { return k == steps_ ? horizon_ : Scalar(k) * step(); }

  VectorX<Scalar> nodes() const {
    VectorX<Scalar> t(size());
    for (Index k = 0; k < size(); ++k) t(k) = node(k);
    return t;
  }

  friend bool operator==(const TimeGrid& a, const TimeGrid& b) {
    return a.horizon_ == b.horizon_ && a.steps_ == b.steps_;
  }

 private:
  Scalar horizon_;
  Index steps_;
};

}  // namespace fracinv
