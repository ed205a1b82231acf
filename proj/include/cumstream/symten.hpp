#pragma once

// Block storage for symmetric tensors of order d over R^n.  The tensor is
// cut into blocks of side b; by symmetry only blocks whose multi-index is
// non-decreasing are stored, in lexicographic order.  Edge blocks are
// truncated when b does not divide n.  Stored blocks keep their full dense
// content, including entries that repeat inside diagonal blocks.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace cumstream {

// Lexicographic ranking of non-decreasing k-tuples over {0,...,alphabet-1}.
// rank() is a sum of precomputed prefix counts, O(k) per call.
class MultisetRanker {
 public:
  MultisetRanker() = default;
  MultisetRanker(int alphabet, int order);

  int alphabet() const noexcept { return alphabet_; }
  int order() const noexcept { return order_; }

  // Number of non-decreasing tuples, C(alphabet+order-1, order).
  std::uint64_t count() const noexcept { return count_; }

  // Pre: tuple.size() == order, non-decreasing, values in [0, alphabet).
  std::uint64_t rank(std::span<const int> tuple) const;

  // Same contract as rank() with no validation; for hot loops.
  std::uint64_t rank_unchecked(const int* tuple) const noexcept {
    std::uint64_t acc = 0;
    int lo = 0;
    for (int i = 0; i < order_; ++i) {
      const int rem = order_ - 1 - i;
      acc += prefix_at(rem, tuple[i]) - prefix_at(rem, lo);
      lo = tuple[i];
    }
    return acc;
  }

  // Inverse of rank.  Pre: r < count(), out.size() == order.
  void unrank(std::uint64_t r, std::span<int> out) const;

 private:
  int alphabet_ = 0;
  int order_ = 0;
  std::uint64_t count_ = 0;
  // prefix_[r][v] = number of non-decreasing (r+1)-tuples over [u, alphabet)
  // summed over u < v; row-major (order rows, alphabet+1 columns).
  std::vector<std::uint64_t> prefix_;

  std::uint64_t prefix_at(int row, int v) const noexcept {
    return prefix_[static_cast<std::size_t>(row) * (alphabet_ + 1) + v];
  }
};

struct BlockInfo {
  std::vector<int> index;    // non-decreasing block coordinates
  std::vector<int> extents;  // per-mode side, min(b, n - index[k]*b)
  std::vector<int> base;     // first dense coordinate per mode, index[k]*b
  std::size_t offset = 0;    // start of the block in the flat buffer
  std::size_t volume = 0;    // product of extents
};

// Dense companion type used by densify/from_dense and by tests.
struct DenseTensor {
  int order = 0;
  int dim = 0;
  std::vector<double> values;  // C order, last index fastest

  DenseTensor() = default;
  DenseTensor(int order, int dim);

  std::size_t linear(std::span<const int> index) const;
  double at(std::span<const int> index) const { return values[linear(index)]; }
  double& at(std::span<const int> index) { return values[linear(index)]; }
  double at(std::initializer_list<int> index) const;
  double& at(std::initializer_list<int> index);
};

class SymTensor {
 public:
  static constexpr int kMaxOrder = 20;  // keeps multiplicities exact in 64 bits

  // Pre: 1 <= order <= kMaxOrder, dim >= 1, 1 <= block_size <= dim.
  SymTensor(int order, int dim, int block_size);

  int order() const noexcept { return order_; }
  int dim() const noexcept { return dim_; }
  int block_size() const noexcept { return block_size_; }
  int block_grid() const noexcept { return grid_; }  // ceil(dim / block_size)

  std::size_t block_count() const noexcept { return blocks_.size(); }
  std::size_t size() const noexcept { return data_.size(); }  // stored doubles

  const BlockInfo& block(std::size_t r) const { return blocks_[r]; }
  std::span<double> block_data(std::size_t r) {
    return {data_.data() + blocks_[r].offset, blocks_[r].volume};
  }
  std::span<const double> block_data(std::size_t r) const {
    return {data_.data() + blocks_[r].offset, blocks_[r].volume};
  }

  // Rank of a stored block.  Pre: non-decreasing, in [0, block_grid()).
  std::uint64_t block_rank(std::span<const int> block_index) const;

  // Element access for any index order; get() sorts a local copy.
  double get(std::span<const int> index) const;
  double get(std::initializer_list<int> index) const;
  // Fast path when the caller already holds a non-decreasing index.
  double get_sorted(std::span<const int> index) const;

  // Writes the value to every stored position that is a permutation of
  // the given index.  Only the canonical block is touched.
  void set_canonical(std::span<const int> index, double value);
  void set_canonical(std::initializer_list<int> index, double value);

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  bool same_shape(const SymTensor& other) const noexcept {
    return order_ == other.order_ && dim_ == other.dim_ &&
           block_size_ == other.block_size_;
  }

  // Unchecked variant of get_sorted for hot loops.  Pre as get_sorted.
  double at_sorted_unchecked(const int* index) const noexcept;

 private:
  int order_ = 0;
  int dim_ = 0;
  int block_size_ = 0;
  int grid_ = 0;
  MultisetRanker block_ranker_;
  std::vector<BlockInfo> blocks_;
  std::vector<double> data_;

  void check_index(std::span<const int> index) const;
};

// d! / (r_1! * ... * r_q!) for the run lengths r_l of a non-decreasing
// block multi-index: the number of dense blocks the stored block stands for.
std::uint64_t block_multiplicity(std::span<const int> block_index);
std::uint64_t block_multiplicity(std::initializer_list<int> block_index);

// t1 + alpha * t2, elementwise over the stored buffers.  Shapes must match.
SymTensor axpy(const SymTensor& t1, const SymTensor& t2, double alpha);

// Element-wise k-norm over the full symmetric tensor, computed from the
// stored part: (sum over stored blocks of multiplicity * sum |e|^k)^(1/k).
// Pre: k >= 1.
double knorm(const SymTensor& t, double k);

DenseTensor densify(const SymTensor& t);
SymTensor from_dense(const DenseTensor& dense, int block_size);

}  // namespace cumstream
