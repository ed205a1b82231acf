#pragma once

// Cumulant tensors from raw moment tensors via the set-partition formula
//   c_s(i) = m_s(i) - sum over partitions of {1..s} with >= 2 parts of
//            the product of lower-order cumulants on the index split.
// Orders are converted bottom-up, so each conversion only reads cumulants
// that are already final.  Only canonical entries are computed; the rest
// of each stored block is filled by its internal symmetry.

#include <span>
#include <vector>

#include "cumstream/moments.hpp"
#include "cumstream/symten.hpp"

namespace cumstream {

// A partition of {0..s-1}: parts ordered by smallest member, members
// ascending.  This is the decode of a restricted growth string, and the
// enumeration below is in restricted-growth lexicographic order.
using SetPartition = std::vector<std::vector<int>>;

// All partitions of {0..s-1} into exactly sigma parts.
// Pre: 1 <= sigma <= s <= 16.
std::vector<SetPartition> partitions(int s, int sigma);

// All partitions of {0..s-1} with at least min_sigma parts.
std::vector<SetPartition> partitions_at_least(int s, int min_sigma);

struct CumulantSeries {
  std::vector<SymTensor> tensors;  // tensors[k] has order k+1
  std::size_t window_len = 0;

  int max_order() const { return static_cast<int>(tensors.size()); }
  int dim() const { return tensors.empty() ? 0 : tensors.front().dim(); }
  int block_size() const { return tensors.empty() ? 0 : tensors.front().block_size(); }
  const SymTensor& order(int s) const { return tensors[static_cast<std::size_t>(s) - 1]; }
  SymTensor& order(int s) { return tensors[static_cast<std::size_t>(s) - 1]; }
};

// The partition-sum correction for one element: sum over partitions of
// {0..s-1} with >= 2 parts of the product of lower cumulants at the index
// split.  `lower` must hold orders 1..s-1 (s = index.size()).
double sym_outer_element(std::span<const int> index, const CumulantSeries& lower);

// Cumulant tensors of orders 1..m.max_order().
CumulantSeries moms2cums(const MomentSeries& m, int workers = 0);

// Convenience: moments then cumulants straight from a sample.
CumulantSeries cumulant_series(const DataBatch& x, int max_order, int block_size,
                               int workers = 0);

}  // namespace cumstream
