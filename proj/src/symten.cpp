#include "cumstream/symten.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cumstream {

namespace {

std::uint64_t binomial_u64(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / i;
  return r;
}

// Number of non-decreasing r-tuples over an alphabet of size a.
std::uint64_t multiset_count(int a, int r) { return binomial_u64(a + r - 1, r); }

void require_sorted(std::span<const int> tuple, const char* what) {
  for (std::size_t i = 1; i < tuple.size(); ++i)
    if (tuple[i - 1] > tuple[i])
      throw std::invalid_argument(std::string(what) + ": index not non-decreasing");
}

}  // namespace

MultisetRanker::MultisetRanker(int alphabet, int order)
    : alphabet_(alphabet), order_(order) {
  if (alphabet < 1 || order < 1)
    throw std::invalid_argument("MultisetRanker: alphabet and order must be positive");
  count_ = multiset_count(alphabet, order);
  prefix_.assign(static_cast<std::size_t>(order) * (alphabet + 1), 0);
  for (int rem = 0; rem < order; ++rem) {
    std::uint64_t acc = 0;
    for (int v = 0; v <= alphabet; ++v) {
      prefix_[static_cast<std::size_t>(rem) * (alphabet + 1) + v] = acc;
      if (v < alphabet) acc += multiset_count(alphabet - v, rem);
    }
  }
}

std::uint64_t MultisetRanker::rank(std::span<const int> tuple) const {
  if (static_cast<int>(tuple.size()) != order_)
    throw std::invalid_argument("MultisetRanker::rank: wrong tuple length");
  std::uint64_t acc = 0;
  int lo = 0;
  for (int i = 0; i < order_; ++i) {
    const int v = tuple[i];
    if (v < lo || v >= alphabet_)
      throw std::out_of_range("MultisetRanker::rank: tuple not sorted or out of range");
    const int rem = order_ - 1 - i;
    acc += prefix_at(rem, v) - prefix_at(rem, lo);
    lo = v;
  }
  return acc;
}

void MultisetRanker::unrank(std::uint64_t r, std::span<int> out) const {
  if (static_cast<int>(out.size()) != order_)
    throw std::invalid_argument("MultisetRanker::unrank: wrong output length");
  if (r >= count_) throw std::out_of_range("MultisetRanker::unrank: rank too large");
  int lo = 0;
  for (int i = 0; i < order_; ++i) {
    const int rem = order_ - 1 - i;
    int v = lo;
    while (r >= prefix_at(rem, v + 1) - prefix_at(rem, lo)) ++v;
    r -= prefix_at(rem, v) - prefix_at(rem, lo);
    out[i] = v;
    lo = v;
  }
}

DenseTensor::DenseTensor(int order, int dim) : order(order), dim(dim) {
  if (order < 1 || dim < 1)
    throw std::invalid_argument("DenseTensor: order and dim must be positive");
  std::size_t total = 1;
  for (int k = 0; k < order; ++k) total *= static_cast<std::size_t>(dim);
  values.assign(total, 0.0);
}

std::size_t DenseTensor::linear(std::span<const int> index) const {
  if (static_cast<int>(index.size()) != order)
    throw std::invalid_argument("DenseTensor: wrong index length");
  std::size_t pos = 0;
  for (int k = 0; k < order; ++k) {
    if (index[k] < 0 || index[k] >= dim)
      throw std::out_of_range("DenseTensor: index out of range");
    pos = pos * dim + static_cast<std::size_t>(index[k]);
  }
  return pos;
}

double DenseTensor::at(std::initializer_list<int> index) const {
  return at(std::span<const int>(index.begin(), index.size()));
}

double& DenseTensor::at(std::initializer_list<int> index) {
  return at(std::span<const int>(index.begin(), index.size()));
}

SymTensor::SymTensor(int order, int dim, int block_size)
    : order_(order), dim_(dim), block_size_(block_size) {
  if (order < 1 || order > kMaxOrder)
    throw std::invalid_argument("SymTensor: order must be in [1, 20]");
  if (dim < 1) throw std::invalid_argument("SymTensor: dim must be positive");
  if (block_size < 1 || block_size > dim)
    throw std::invalid_argument("SymTensor: block_size must be in [1, dim]");
  grid_ = (dim + block_size - 1) / block_size;
  block_ranker_ = MultisetRanker(grid_, order_);

  blocks_.reserve(block_ranker_.count());
  std::vector<int> j(order_, 0);
  std::size_t offset = 0;
  for (;;) {
    BlockInfo bi;
    bi.index = j;
    bi.extents.resize(order_);
    bi.base.resize(order_);
    bi.volume = 1;
    for (int k = 0; k < order_; ++k) {
      bi.base[k] = j[k] * block_size_;
      bi.extents[k] = std::min(block_size_, dim_ - bi.base[k]);
      bi.volume *= static_cast<std::size_t>(bi.extents[k]);
    }
    bi.offset = offset;
    offset += bi.volume;
    blocks_.push_back(std::move(bi));

    int k = order_ - 1;
    while (k >= 0 && j[k] == grid_ - 1) --k;
    if (k < 0) break;
    const int v = j[k] + 1;
    for (int l = k; l < order_; ++l) j[l] = v;
  }
  data_.assign(offset, 0.0);
}

std::uint64_t SymTensor::block_rank(std::span<const int> block_index) const {
  require_sorted(block_index, "SymTensor::block_rank");
  return block_ranker_.rank(block_index);
}

void SymTensor::check_index(std::span<const int> index) const {
  if (static_cast<int>(index.size()) != order_)
    throw std::invalid_argument("SymTensor: wrong index length");
  for (int v : index)
    if (v < 0 || v >= dim_) throw std::out_of_range("SymTensor: index out of range");
}

double SymTensor::get(std::span<const int> index) const {
  check_index(index);
  std::vector<int> sorted(index.begin(), index.end());
  std::sort(sorted.begin(), sorted.end());
  return at_sorted_unchecked(sorted.data());
}

double SymTensor::get(std::initializer_list<int> index) const {
  return get(std::span<const int>(index.begin(), index.size()));
}

double SymTensor::get_sorted(std::span<const int> index) const {
  check_index(index);
  require_sorted(index, "SymTensor::get_sorted");
  return at_sorted_unchecked(index.data());
}

double SymTensor::at_sorted_unchecked(const int* index) const noexcept {
  if (block_size_ == 1) return data_[block_ranker_.rank_unchecked(index)];
  int j[kMaxOrder];
  for (int k = 0; k < order_; ++k) j[k] = index[k] / block_size_;
  const BlockInfo& bi = blocks_[block_ranker_.rank_unchecked(j)];
  std::size_t off = 0;
  for (int k = 0; k < order_; ++k)
    off = off * static_cast<std::size_t>(bi.extents[k]) +
          static_cast<std::size_t>(index[k] - bi.base[k]);
  return data_[bi.offset + off];
}

void SymTensor::set_canonical(std::span<const int> index, double value) {
  check_index(index);
  std::vector<int> sorted(index.begin(), index.end());
  std::sort(sorted.begin(), sorted.end());

  std::vector<int> j(order_), o(order_);
  for (int k = 0; k < order_; ++k) {
    j[k] = sorted[k] / block_size_;
    o[k] = sorted[k] - j[k] * block_size_;
  }
  BlockInfo& bi = blocks_[block_ranker_.rank(j)];

  // Offsets permute only inside runs of equal block coordinate; distinct
  // permutations per run address every stored copy of the element.
  std::vector<std::pair<int, int>> runs;  // [start, end)
  for (int s = 0; s < order_;) {
    int e = s + 1;
    while (e < order_ && j[e] == j[s]) ++e;
    runs.emplace_back(s, e);
    s = e;
  }
  const auto write_current = [&] {
    std::size_t off = 0;
    for (int k = 0; k < order_; ++k)
      off = off * static_cast<std::size_t>(bi.extents[k]) + static_cast<std::size_t>(o[k]);
    data_[bi.offset + off] = value;
  };
  const auto rec = [&](auto&& self, std::size_t run) -> void {
    if (run == runs.size()) {
      write_current();
      return;
    }
    const auto [s, e] = runs[run];
    do {
      self(self, run + 1);
    } while (std::next_permutation(o.begin() + s, o.begin() + e));
  };
  rec(rec, 0);
}

void SymTensor::set_canonical(std::initializer_list<int> index, double value) {
  set_canonical(std::span<const int>(index.begin(), index.size()), value);
}

std::uint64_t block_multiplicity(std::span<const int> block_index) {
  const int d = static_cast<int>(block_index.size());
  if (d < 1) throw std::invalid_argument("block_multiplicity: empty index");
  if (d > 20) throw std::invalid_argument("block_multiplicity: order too large for exact count");
  require_sorted(block_index, "block_multiplicity");
  std::uint64_t num = 1;
  for (int i = 2; i <= d; ++i) num *= static_cast<std::uint64_t>(i);
  for (int s = 0; s < d;) {
    int e = s + 1;
    while (e < d && block_index[e] == block_index[s]) ++e;
    for (int i = 2; i <= e - s; ++i) num /= static_cast<std::uint64_t>(i);
    s = e;
  }
  return num;
}

std::uint64_t block_multiplicity(std::initializer_list<int> block_index) {
  return block_multiplicity(std::span<const int>(block_index.begin(), block_index.size()));
}

SymTensor axpy(const SymTensor& t1, const SymTensor& t2, double alpha) {
  if (!t1.same_shape(t2)) throw std::invalid_argument("axpy: shape mismatch");
  SymTensor out = t1;
  double* z = out.data().data();
  const double* y = t2.data().data();
  const std::size_t m = out.size();
  for (std::size_t i = 0; i < m; ++i) z[i] += alpha * y[i];
  return out;
}

double knorm(const SymTensor& t, double k) {
  if (!(k >= 1.0)) throw std::invalid_argument("knorm: k must be >= 1");
  double acc = 0.0;
  for (std::size_t r = 0; r < t.block_count(); ++r) {
    const auto mult = static_cast<double>(block_multiplicity(t.block(r).index));
    const auto vals = t.block_data(r);
    double s = 0.0;
    if (k == 2.0) {
      for (double v : vals) s += v * v;
    } else if (k == 1.0) {
      for (double v : vals) s += std::abs(v);
    } else {
      for (double v : vals) s += std::pow(std::abs(v), k);
    }
    acc += mult * s;
  }
  if (k == 2.0) return std::sqrt(acc);
  if (k == 1.0) return acc;
  return std::pow(acc, 1.0 / k);
}

DenseTensor densify(const SymTensor& t) {
  DenseTensor out(t.order(), t.dim());
  const int d = t.order();
  const int n = t.dim();
  std::vector<int> idx(d, 0), sorted(d);
  for (std::size_t pos = 0;; ++pos) {
    sorted.assign(idx.begin(), idx.end());
    std::sort(sorted.begin(), sorted.end());
    out.values[pos] = t.at_sorted_unchecked(sorted.data());
    int k = d - 1;
    while (k >= 0 && idx[k] == n - 1) idx[k--] = 0;
    if (k < 0) break;
    ++idx[k];
  }
  return out;
}

SymTensor from_dense(const DenseTensor& dense, int block_size) {
  SymTensor out(dense.order, dense.dim, block_size);
  const int d = dense.order;
  std::vector<int> idx(d);
  for (std::size_t r = 0; r < out.block_count(); ++r) {
    const BlockInfo& bi = out.block(r);
    auto vals = out.block_data(r);
    std::vector<int> o(d, 0);
    for (std::size_t pos = 0;; ++pos) {
      for (int k = 0; k < d; ++k) idx[k] = bi.base[k] + o[k];
      vals[pos] = dense.at(idx);
      int k = d - 1;
      while (k >= 0 && o[k] == bi.extents[k] - 1) o[k--] = 0;
      if (k < 0) break;
      ++o[k];
    }
  }
  return out;
}

}  // namespace cumstream
