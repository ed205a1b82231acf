#include "cumstream/moments.hpp"

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "cumstream/parallel.hpp"

namespace cumstream {

namespace {

std::atomic<std::uint64_t> g_rows_read{0};

std::uint64_t binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / i;
  return r;
}

// The accumulator is one flat array per order 1..d holding the canonical
// entries (non-decreasing index tuples) in lexicographic order.  A single
// descent over the sorted tuples of order d passes through every lower
// tuple as a prefix, so one pass per sample fills all orders.
//
// pos[k] tracks the write cursor of level k; the two deepest levels are
// fused into plain loops so the hot path is a contiguous multiply-add.
template <bool WriteAll>
void descend(const double* __restrict row, int n, int d, int level, int lo, int hi,
             double p, double* const* acc, std::size_t* pos) {
  if (level == d - 2) {
    double* __restrict a1 = acc[d - 2];
    double* __restrict a2 = acc[d - 1];
    std::size_t p1 = pos[d - 2];
    std::size_t p2 = pos[d - 1];
    for (int i = lo; i < hi; ++i) {
      const double q = p * row[i];
      if constexpr (WriteAll) a1[p1] += q;
      ++p1;
      double* __restrict out = a2 + p2;
      const double* __restrict src = row + i;
      const int len = n - i;
      for (int k = 0; k < len; ++k) out[k] += q * src[k];
      p2 += static_cast<std::size_t>(len);
    }
    pos[d - 2] = p1;
    pos[d - 1] = p2;
    return;
  }
  for (int i = lo; i < hi; ++i) {
    const double q = p * row[i];
    if constexpr (WriteAll) acc[level][pos[level]] += q;
    ++pos[level];
    descend<WriteAll>(row, n, d, level + 1, i, n, q, acc, pos);
  }
}

template <bool WriteAll>
void row_pass(const double* __restrict row, int n, int d, int top_lo, int top_hi,
              double* const* acc, std::size_t* pos) {
  if (d == 1) {
    double* __restrict a = acc[0] + pos[0];
    for (int i = top_lo; i < top_hi; ++i) a[i - top_lo] += row[i];
    pos[0] += static_cast<std::size_t>(top_hi - top_lo);
    return;
  }
  descend<WriteAll>(row, n, d, 0, top_lo, top_hi, 1.0, acc, pos);
}

// Contiguous leading-index ranges of roughly equal leaf weight.  Returns
// workers + 1 boundaries; empty ranges are possible for tiny problems.
std::vector<int> split_leading(int n, int d, int workers) {
  std::vector<int> bounds{0};
  if (workers <= 1) {
    bounds.push_back(n);
    return bounds;
  }
  std::uint64_t total = 0;
  std::vector<std::uint64_t> weight(n);
  for (int i = 0; i < n; ++i) {
    weight[i] = binom(n - i + d - 2, d - 1);  // leaves below leading index i
    total += weight[i];
  }
  std::uint64_t acc = 0, taken = 0;
  int next = 1;
  for (int i = 0; i < n; ++i) {
    acc += weight[i];
    while (next < workers &&
           acc - taken >= (total - taken) / static_cast<std::uint64_t>(workers - next + 1)) {
      bounds.push_back(i + 1);
      taken = acc;
      ++next;
    }
  }
  while (static_cast<int>(bounds.size()) < workers + 1) bounds.push_back(n);
  return bounds;
}

struct Pyramid {
  int dim = 0;
  int max_order = 0;
  std::vector<MultisetRanker> rankers;     // [k]: alphabet dim, order k+1
  std::vector<std::vector<double>> level;  // [k]: canonical entries, lex order

  Pyramid(int dim, int max_order, bool all_levels) : dim(dim), max_order(max_order) {
    level.resize(max_order);
    for (int k = 0; k < max_order; ++k) {
      rankers.emplace_back(dim, k + 1);
      if (all_levels || k >= max_order - 2)
        level[k].assign(rankers[k].count(), 0.0);
    }
  }
};

// Mean over the batch rows of the outer powers, accumulated into the
// pyramid.  Each worker owns the contiguous tuple ranges of its leading
// indices, so the result does not depend on the worker count.
template <bool WriteAll>
void accumulate(Pyramid& pyr, const DataBatch& x, int workers) {
  const int n = pyr.dim;
  const int d = pyr.max_order;
  std::vector<double*> acc(d, nullptr);
  for (int k = 0; k < d; ++k)
    if (!pyr.level[k].empty()) acc[k] = pyr.level[k].data();

  const auto bounds = split_leading(n, d, resolve_workers(workers));
  const auto work = [&](std::size_t c0, std::size_t c1) {
    for (std::size_t c = c0; c < c1; ++c) {
      const int lo = bounds[c], hi = bounds[c + 1];
      if (lo >= hi) continue;
      std::vector<std::size_t> pos0(d);
      std::vector<int> corner(d, lo);
      for (int k = 0; k < d; ++k)
        pos0[k] = pyr.rankers[k].rank_unchecked(corner.data());
      std::vector<std::size_t> pos(d);
      for (std::size_t r = 0; r < x.rows; ++r) {
        std::copy(pos0.begin(), pos0.end(), pos.begin());
        row_pass<WriteAll>(x.row(r), n, d, lo, hi, acc.data(), pos.data());
      }
    }
  };
  parallel_chunks(bounds.size() - 1, static_cast<int>(bounds.size()) - 1, work);

  const double inv = 1.0 / static_cast<double>(x.rows);
  for (auto& lv : pyr.level)
    for (double& v : lv) v *= inv;
}

// Applies f(stored_offset, pyramid_rank) to every stored entry of t.
// Entries of blocks with distinct coordinates are already sorted; only
// runs of equal block coordinates need a local sort.
template <class F>
void for_each_entry(const SymTensor& t, const MultisetRanker& rk, std::size_t b0,
                    std::size_t b1, F&& f) {
  const int d = t.order();
  int idx[SymTensor::kMaxOrder];
  int sorted[SymTensor::kMaxOrder];
  int o[SymTensor::kMaxOrder];
  for (std::size_t r = b0; r < b1; ++r) {
    const BlockInfo& bi = t.block(r);
    bool diagonal = false;
    for (int k = 1; k < d; ++k) diagonal = diagonal || bi.index[k] == bi.index[k - 1];
    std::fill(o, o + d, 0);
    for (std::size_t pos = 0; pos < bi.volume; ++pos) {
      for (int k = 0; k < d; ++k) idx[k] = bi.base[k] + o[k];
      if (diagonal) {
        std::copy(idx, idx + d, sorted);
        for (int k = 1; k < d; ++k) {  // insertion sort, d is tiny
          const int v = sorted[k];
          int j = k - 1;
          while (j >= 0 && sorted[j] > v) {
            sorted[j + 1] = sorted[j];
            --j;
          }
          sorted[j + 1] = v;
        }
        f(bi.offset + pos, rk.rank_unchecked(sorted));
      } else {
        f(bi.offset + pos, rk.rank_unchecked(idx));
      }
      int k = d - 1;
      while (k >= 0 && o[k] == bi.extents[k] - 1) o[k--] = 0;
      if (k < 0) break;
      ++o[k];
    }
  }
}

void check_batch(const DataBatch& x, const char* what) {
  if (x.rows < 1) throw std::invalid_argument(std::string(what) + ": empty batch");
  if (x.cols < 1) throw std::invalid_argument(std::string(what) + ": no columns");
  if (x.values.size() != x.rows * x.cols)
    throw std::invalid_argument(std::string(what) + ": bad batch buffer size");
}

SymTensor scatter(const Pyramid& pyr, int order, int block_size, int workers) {
  SymTensor out(order, pyr.dim, block_size);
  const MultisetRanker& rk = pyr.rankers[order - 1];
  const double* src = pyr.level[order - 1].data();
  double* dst = out.data().data();
  parallel_chunks(out.block_count(), resolve_workers(workers),
                  [&](std::size_t b0, std::size_t b1) {
                    for_each_entry(out, rk, b0, b1, [&](std::size_t off, std::uint64_t r) {
                      dst[off] = src[r];
                    });
                  });
  return out;
}

}  // namespace

std::uint64_t rows_read() { return g_rows_read.load(std::memory_order_relaxed); }

SymTensor moment_tensor(const DataBatch& x, int order, int block_size, int workers) {
  check_batch(x, "moment_tensor");
  if (order < 1 || order > SymTensor::kMaxOrder)
    throw std::invalid_argument("moment_tensor: order out of range");
  g_rows_read.fetch_add(x.rows, std::memory_order_relaxed);
  const int n = static_cast<int>(x.cols);
  Pyramid pyr(n, order, /*all_levels=*/false);
  accumulate<false>(pyr, x, workers);
  return scatter(pyr, order, block_size, workers);
}

MomentSeries moment_series(const DataBatch& x, int max_order, int block_size, int workers) {
  check_batch(x, "moment_series");
  if (max_order < 1 || max_order > SymTensor::kMaxOrder)
    throw std::invalid_argument("moment_series: max_order out of range");
  g_rows_read.fetch_add(x.rows, std::memory_order_relaxed);
  const int n = static_cast<int>(x.cols);
  Pyramid pyr(n, max_order, /*all_levels=*/true);
  accumulate<true>(pyr, x, workers);
  MomentSeries out;
  out.window_len = x.rows;
  out.tensors.reserve(max_order);
  for (int s = 1; s <= max_order; ++s)
    out.tensors.push_back(scatter(pyr, s, block_size, workers));
  return out;
}

MomentSeries combine(const MomentSeries& m1, std::size_t s1, const MomentSeries& m2,
                     std::size_t s2) {
  if (m1.max_order() != m2.max_order())
    throw std::invalid_argument("combine: order mismatch");
  if (s1 + s2 == 0) throw std::invalid_argument("combine: empty combination");
  const double w1 = static_cast<double>(s1) / static_cast<double>(s1 + s2);
  const double w2 = static_cast<double>(s2) / static_cast<double>(s1 + s2);
  MomentSeries out;
  out.window_len = s1 + s2;
  out.tensors.reserve(m1.tensors.size());
  for (int k = 0; k < m1.max_order(); ++k) {
    const SymTensor& a = m1.tensors[k];
    const SymTensor& b = m2.tensors[k];
    if (!a.same_shape(b)) throw std::invalid_argument("combine: shape mismatch");
    SymTensor z = a;
    double* zd = z.data().data();
    const double* bd = b.data().data();
    for (std::size_t i = 0; i < z.size(); ++i) zd[i] = w1 * zd[i] + w2 * bd[i];
    out.tensors.push_back(std::move(z));
  }
  return out;
}

void moments_update(MomentSeries& m, const DataBatch& incoming, const DataBatch& outgoing,
                    int workers) {
  check_batch(incoming, "moments_update");
  check_batch(outgoing, "moments_update");
  if (m.tensors.empty()) throw std::invalid_argument("moments_update: empty series");
  if (incoming.rows != outgoing.rows)
    throw std::invalid_argument("moments_update: batch sizes differ");
  if (incoming.rows > m.window_len)
    throw std::invalid_argument("moments_update: batch longer than the window");
  const int n = m.dim();
  if (static_cast<int>(incoming.cols) != n || static_cast<int>(outgoing.cols) != n)
    throw std::invalid_argument("moments_update: dimension mismatch");
  g_rows_read.fetch_add(incoming.rows + outgoing.rows, std::memory_order_relaxed);

  const int d = m.max_order();
  Pyramid pin(n, d, true), pout(n, d, true);
  accumulate<true>(pin, incoming, workers);
  accumulate<true>(pout, outgoing, workers);

  const double c = static_cast<double>(incoming.rows) / static_cast<double>(m.window_len);
  for (int s = 1; s <= d; ++s) {
    SymTensor& t = m.order(s);
    const MultisetRanker& rk = pin.rankers[s - 1];
    const double* a = pin.level[s - 1].data();
    const double* b = pout.level[s - 1].data();
    double* dst = t.data().data();
    parallel_chunks(t.block_count(), resolve_workers(workers),
                    [&](std::size_t b0, std::size_t b1) {
                      for_each_entry(t, rk, b0, b1, [&](std::size_t off, std::uint64_t r) {
                        dst[off] += c * (a[r] - b[r]);
                      });
                    });
  }
}

}  // namespace cumstream
