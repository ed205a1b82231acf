#include "cumstream/stream.hpp"

#include <chrono>
#include <cstring>
#include <iostream>
#include <stdexcept>

namespace cumstream {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

void StreamConfig::validate() const {
  if (dim < 1) throw std::invalid_argument("StreamConfig: dim must be positive");
  if (max_order < 2) throw std::invalid_argument("StreamConfig: max_order must be >= 2");
  if (window_len < 1) throw std::invalid_argument("StreamConfig: window_len must be positive");
  if (update_len < 1 || update_len > window_len)
    throw std::invalid_argument("StreamConfig: update_len must be in [1, window_len]");
  if (block_size < 1 || block_size > dim)
    throw std::invalid_argument("StreamConfig: block_size must be in [1, dim]");
  if (workers < 0) throw std::invalid_argument("StreamConfig: workers must be >= 0");
}

WindowBuffer::WindowBuffer(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), values_(rows * cols) {}

void WindowBuffer::fill(const DataBatch& x) {
  if (x.rows != rows_ || x.cols != cols_)
    throw std::invalid_argument("WindowBuffer::fill: batch does not match capacity");
  std::memcpy(values_.data(), x.values.data(), values_.size() * sizeof(double));
  head_ = 0;
}

DataBatch WindowBuffer::exchange(const DataBatch& x) {
  if (x.cols != cols_) throw std::invalid_argument("WindowBuffer::exchange: column mismatch");
  if (x.rows < 1 || x.rows > rows_)
    throw std::invalid_argument("WindowBuffer::exchange: batch size out of range");
  DataBatch out;
  out.rows = x.rows;
  out.cols = cols_;
  out.values.resize(x.rows * cols_);
  for (std::size_t r = 0; r < x.rows; ++r) {
    double* slot = values_.data() + head_ * cols_;
    std::memcpy(out.values.data() + r * cols_, slot, cols_ * sizeof(double));
    std::memcpy(slot, x.values.data() + r * cols_, cols_ * sizeof(double));
    head_ = (head_ + 1) % rows_;
  }
  return out;
}

DataBatch WindowBuffer::materialize() const {
  DataBatch out;
  out.rows = rows_;
  out.cols = cols_;
  out.values.resize(values_.size());
  const std::size_t tail = rows_ - head_;
  std::memcpy(out.values.data(), values_.data() + head_ * cols_,
              tail * cols_ * sizeof(double));
  std::memcpy(out.values.data() + tail * cols_, values_.data(),
              head_ * cols_ * sizeof(double));
  return out;
}

WindowState prime(const StreamConfig& config, const DataBatch& first) {
  config.validate();
  if (first.rows != config.window_len ||
      static_cast<int>(first.cols) != config.dim)
    throw std::invalid_argument("prime: batch does not match the configured window");
  WindowState state;
  state.config = config;
  state.buffer = WindowBuffer(config.window_len, static_cast<std::size_t>(config.dim));
  state.buffer.fill(first);
  state.moments =
      moment_series(first, config.max_order, config.block_size, config.workers);
  state.window = 1;
  state.steps_since_resync = 0;
  return state;
}

CumulantSeries step(WindowState& state, const DataBatch& x, StepTiming* timing) {
  const StreamConfig& cfg = state.config;
  if (x.rows != cfg.update_len || static_cast<int>(x.cols) != cfg.dim)
    throw std::invalid_argument("step: batch does not match the configured update");

  auto t0 = std::chrono::steady_clock::now();
  const DataBatch outgoing = state.buffer.exchange(x);
  if (cfg.resync_every > 0 && state.steps_since_resync + 1 >= cfg.resync_every) {
    state.moments = moment_series(state.buffer.materialize(), cfg.max_order,
                                  cfg.block_size, cfg.workers);
    state.steps_since_resync = 0;
  } else {
    moments_update(state.moments, x, outgoing, cfg.workers);
    ++state.steps_since_resync;
  }
  if (timing) timing->update_s = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  CumulantSeries cums = moms2cums(state.moments, cfg.workers);
  if (timing) timing->moms2cums_s = seconds_since(t0);

  ++state.window;
  return cums;
}

void run(const StreamConfig& config, BatchSource& source, const ReportSink& sink) {
  config.validate();
  auto first = source.next(config.window_len);
  if (!first || first->rows < config.window_len)
    throw std::runtime_error("run: source ended before the first window was full");

  WindowState state = prime(config, *first);
  first.reset();
  sink(make_window_report(state.window, moms2cums(state.moments, config.workers)));

  for (;;) {
    auto batch = source.next(config.update_len);
    if (!batch) break;
    if (batch->rows < config.update_len) {
      if (batch->rows > 0)
        std::cerr << "warning: discarding " << batch->rows
                  << " trailing rows shorter than one update\n";
      break;
    }
    const CumulantSeries cums = step(state, *batch);
    sink(make_window_report(state.window, cums));
  }
}

}  // namespace cumstream
