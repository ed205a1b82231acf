#pragma once

// Raw (non-central) moment tensors of multivariate samples in block
// storage, plus the sliding-window update
//   M(next) = M(curr) + (t_up / t) * (M(incoming) - M(outgoing)).
//
// The accumulation kernel walks each sample once over all non-decreasing
// index tuples up to the requested order, sharing prefix products between
// orders, and scatters the canonical values into block storage afterwards.
// Workers split the leading index, so every stored entry is owned by
// exactly one worker and results are bitwise identical for any worker
// count.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cumstream/symten.hpp"

namespace cumstream {

struct DataBatch {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;  // row-major

  const double* row(std::size_t r) const { return values.data() + r * cols; }
  double* row(std::size_t r) { return values.data() + r * cols; }
  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

// Moment tensors of orders 1..max_order over a window of window_len rows.
struct MomentSeries {
  std::vector<SymTensor> tensors;  // tensors[k] has order k+1
  std::size_t window_len = 0;

  int max_order() const { return static_cast<int>(tensors.size()); }
  int dim() const { return tensors.empty() ? 0 : tensors.front().dim(); }
  int block_size() const { return tensors.empty() ? 0 : tensors.front().block_size(); }
  const SymTensor& order(int s) const { return tensors[static_cast<std::size_t>(s) - 1]; }
  SymTensor& order(int s) { return tensors[static_cast<std::size_t>(s) - 1]; }
};

// Total sample rows handed to the moment routines so far, in this process.
// Each row of each batch counts once per public call that consumes it.
std::uint64_t rows_read();

// Single raw moment tensor of the given order.  Pre: x.rows >= 1.
SymTensor moment_tensor(const DataBatch& x, int order, int block_size, int workers = 0);

// Raw moment tensors of all orders 1..max_order in one pass over the data.
MomentSeries moment_series(const DataBatch& x, int max_order, int block_size,
                           int workers = 0);

// Moments of the concatenation of two disjoint samples:
// (s1 * M1 + s2 * M2) / (s1 + s2), elementwise.
MomentSeries combine(const MomentSeries& m1, std::size_t s1, const MomentSeries& m2,
                     std::size_t s2);

// Sliding-window update.  Both batches must have incoming.rows ==
// outgoing.rows == t_up <= m.window_len rows and the series dimension.
void moments_update(MomentSeries& m, const DataBatch& incoming, const DataBatch& outgoing,
                    int workers = 0);

}  // namespace cumstream
