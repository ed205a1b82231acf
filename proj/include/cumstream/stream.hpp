#pragma once

// Sliding-window engine: a ring buffer over the last t rows, moment
// tensors kept current by windowed updates, cumulants and a report per
// window.  Moments are recomputed from the buffer every resync_every
// steps to stop floating-point drift.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>

#include "cumstream/cumulants.hpp"
#include "cumstream/gauge.hpp"
#include "cumstream/moments.hpp"

namespace cumstream {

struct StreamConfig {
  int dim = 0;                     // n, columns per row
  int max_order = 4;               // d, highest cumulant order
  std::size_t window_len = 0;      // t, rows per window
  std::size_t update_len = 0;      // t_up, rows per step
  int block_size = 1;              // b
  std::size_t resync_every = 1000; // steps between recomputes; 0 disables
  int workers = 0;                 // 0 = library default

  void validate() const;  // throws std::invalid_argument
};

// Fixed-capacity row ring holding the current window in arrival order.
class WindowBuffer {
 public:
  WindowBuffer() = default;
  WindowBuffer(std::size_t rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  // Copies the whole window in at once.  Pre: x matches the capacity.
  void fill(const DataBatch& x);

  // Drops the x.rows oldest rows, appends x, returns the dropped rows in
  // arrival order.  Pre: 1 <= x.rows <= rows().
  DataBatch exchange(const DataBatch& x);

  // The window contents in arrival order.
  DataBatch materialize() const;

 private:
  std::size_t rows_ = 0, cols_ = 0, head_ = 0;
  std::vector<double> values_;  // row-major ring, head_ = oldest row
};

struct WindowState {
  StreamConfig config;
  WindowBuffer buffer;
  MomentSeries moments;
  std::uint64_t window = 0;           // 1-based index of the last window
  std::size_t steps_since_resync = 0;
};

struct StepTiming {
  double update_s = 0.0;
  double moms2cums_s = 0.0;
};

// Builds the first window.  Pre: first.rows == config.window_len.
WindowState prime(const StreamConfig& config, const DataBatch& first);

// Advances the window by one update batch and returns the cumulants of
// the new window.  Pre: x.rows == config.update_len.
CumulantSeries step(WindowState& state, const DataBatch& x, StepTiming* timing = nullptr);

// Pull interface for row sources.  next(rows) returns up to `rows` rows;
// fewer signals that the source is drained, std::nullopt that it already
// was.
class BatchSource {
 public:
  virtual ~BatchSource() = default;
  virtual std::optional<DataBatch> next(std::size_t rows) = 0;
};

using ReportSink = std::function<void(const WindowReport&)>;

// Primes from the source, then steps until the source drains, invoking
// the sink once per window (the first window included).  A final batch
// shorter than update_len is discarded with a warning on stderr.
void run(const StreamConfig& config, BatchSource& source, const ReportSink& sink);

}  // namespace cumstream
