#include "adaptrack/series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace adaptrack {

RingBuffer::RingBuffer(std::size_t capacity) : data_(capacity) {
  if (capacity == 0) throw std::invalid_argument("RingBuffer: zero capacity");
}

void RingBuffer::push(double v) {
  if (size_ < data_.size()) {
    data_[(head_ + size_) % data_.size()] = v;
    ++size_;
  } else {
    const double evicted = data_[head_];
    sum_ -= evicted;
    sumsq_ -= evicted * evicted;
    data_[head_] = v;
    head_ = (head_ + 1) % data_.size();
  }
  sum_ += v;
  sumsq_ += v * v;
}

double RingBuffer::operator[](std::size_t i) const {
  return data_[(head_ + i) % data_.size()];
}

double RingBuffer::mean() const {
  return size_ == 0 ? 0.0 : sum_ / static_cast<double>(size_);
}

double RingBuffer::stddev() const {
  if (size_ == 0) return 0.0;
  const double m = mean();
  return std::sqrt(std::max(0.0, sumsq_ / static_cast<double>(size_) - m * m));
}

double series_cv(const RingBuffer& series, double mean_eps) {
  if (series.size() < 2) return 0.0;
  const double m = series.mean();
  if (m < mean_eps) return 0.0;
  return series.stddev() / m;
}

DescriptorSeries::DescriptorSeries(const SeriesConfig& cfg)
    : cfg_(cfg),
      speed_(cfg.window),
      turn_(cfg.window),
      hist_sim_(cfg.window),
      cov_sim_(cfg.window) {}

void DescriptorSeries::update(const Detection& prev, const Detection& cur) {
  const int gap = cur.frame - prev.frame;
  if (gap <= 0)
    throw std::invalid_argument("DescriptorSeries::update: frames not increasing");

  const Eigen::Vector2d step(cur.bbox.cx() - prev.bbox.cx(),
                             cur.bbox.cy() - prev.bbox.cy());
  speed_.push(step.norm() / gap);

  double turn = 0.0;
  if (last_step_ && last_step_->norm() > 1e-12 && step.norm() > 1e-12) {
    // atan2 keeps exactly-collinear steps at exactly 0 (or pi)
    const double cross = last_step_->x() * step.y() - last_step_->y() * step.x();
    const double dot = last_step_->dot(step);
    turn = std::atan2(std::abs(cross), dot);
  }
  turn_.push(turn);
  last_step_ = step;

  hist_sim_.push(
      histogram_similarity(prev.appearance.histogram, cur.appearance.histogram));
  cov_sim_.push(covariance_similarity(prev.appearance.covariance,
                                      cur.appearance.covariance,
                                      cfg_.covariance_scale));
}

}  // namespace adaptrack
