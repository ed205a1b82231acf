#include "cumstream/cumulants.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "cumstream/parallel.hpp"

namespace cumstream {

namespace {

// Restricted growth strings: a[0] = 0, a[i] <= 1 + max(a[0..i-1]).  Each
// string is one set partition, label = part number by first occurrence.
// Recursing in label order yields the strings lexicographically.
template <class Emit>
void rgs_walk(int i, int s, int max_label, std::vector<int>& a, Emit&& emit) {
  if (i == s) {
    emit(a, max_label + 1);
    return;
  }
  for (int v = 0; v <= max_label + 1 && v < s; ++v) {
    a[i] = v;
    rgs_walk(i + 1, s, std::max(max_label, v), a, emit);
  }
}

SetPartition decode(const std::vector<int>& a, int parts) {
  SetPartition out(parts);
  for (int i = 0; i < static_cast<int>(a.size()); ++i) out[a[i]].push_back(i);
  return out;
}

void check_s(int s) {
  if (s < 1 || s > 16) throw std::invalid_argument("partitions: s must be in [1, 16]");
}

// Partitions of {0..s-1} with >= 2 parts, flattened for the inner loop:
// per partition the part count, then per part its length and positions.
struct PackedPartitions {
  std::vector<int> stream;
  std::size_t count = 0;
};

PackedPartitions pack_corrections(int s) {
  PackedPartitions out;
  std::vector<int> a(s, 0);
  rgs_walk(1, s, 0, a, [&](const std::vector<int>& rgs, int parts) {
    if (parts < 2) return;
    ++out.count;
    const SetPartition p = decode(rgs, parts);
    out.stream.push_back(parts);
    for (const auto& part : p) {
      out.stream.push_back(static_cast<int>(part.size()));
      out.stream.insert(out.stream.end(), part.begin(), part.end());
    }
  });
  return out;
}

// Sum over the packed partitions of the product of lower cumulants on the
// index split.  Pre: index sorted; sub-tuples of a sorted tuple stay
// sorted because part positions ascend.
double correction_sorted(const int* index, const PackedPartitions& packed,
                         const SymTensor* const* lower) {
  double acc = 0.0;
  const int* p = packed.stream.data();
  const int* end = p + packed.stream.size();
  int sub[SymTensor::kMaxOrder];
  while (p < end) {
    const int parts = *p++;
    double prod = 1.0;
    for (int q = 0; q < parts; ++q) {
      const int len = *p++;
      for (int k = 0; k < len; ++k) sub[k] = index[p[k]];
      p += len;
      prod *= lower[len - 1]->at_sorted_unchecked(sub);
    }
    acc += prod;
  }
  return acc;
}

}  // namespace

std::vector<SetPartition> partitions(int s, int sigma) {
  check_s(s);
  if (sigma < 1 || sigma > s)
    throw std::invalid_argument("partitions: sigma must be in [1, s]");
  std::vector<SetPartition> out;
  std::vector<int> a(s, 0);
  rgs_walk(1, s, 0, a, [&](const std::vector<int>& rgs, int parts) {
    if (parts == sigma) out.push_back(decode(rgs, parts));
  });
  return out;
}

std::vector<SetPartition> partitions_at_least(int s, int min_sigma) {
  check_s(s);
  if (min_sigma < 1 || min_sigma > s)
    throw std::invalid_argument("partitions_at_least: min_sigma must be in [1, s]");
  std::vector<SetPartition> out;
  std::vector<int> a(s, 0);
  rgs_walk(1, s, 0, a, [&](const std::vector<int>& rgs, int parts) {
    if (parts >= min_sigma) out.push_back(decode(rgs, parts));
  });
  return out;
}

double sym_outer_element(std::span<const int> index, const CumulantSeries& lower) {
  const int s = static_cast<int>(index.size());
  check_s(s);
  if (s == 1) return 0.0;
  if (lower.max_order() < s - 1)
    throw std::invalid_argument("sym_outer_element: missing lower cumulant orders");
  const int n = lower.dim();
  for (int v : index)
    if (v < 0 || v >= n) throw std::out_of_range("sym_outer_element: index out of range");

  std::vector<int> sorted(index.begin(), index.end());
  std::sort(sorted.begin(), sorted.end());
  const PackedPartitions packed = pack_corrections(s);
  std::vector<const SymTensor*> ptrs;
  for (int k = 1; k < s; ++k) ptrs.push_back(&lower.order(k));
  return correction_sorted(sorted.data(), packed, ptrs.data());
}

CumulantSeries moms2cums(const MomentSeries& m, int workers) {
  if (m.tensors.empty()) throw std::invalid_argument("moms2cums: empty series");
  const int d = m.max_order();
  for (int s = 1; s <= d; ++s) {
    const SymTensor& t = m.order(s);
    if (t.order() != s || t.dim() != m.dim() || t.block_size() != m.block_size())
      throw std::invalid_argument("moms2cums: series tensors disagree on shape");
  }
  CumulantSeries out;
  out.window_len = m.window_len;
  out.tensors.reserve(d);
  out.tensors.push_back(m.tensors.front());  // first cumulant is the mean

  for (int s = 2; s <= d; ++s) {
    SymTensor cs = m.order(s);
    const PackedPartitions packed = pack_corrections(s);
    std::vector<const SymTensor*> lower;
    for (int k = 1; k < s; ++k) lower.push_back(&out.order(k));
    const SymTensor* const* lowerp = lower.data();

    double* data = cs.data().data();
    parallel_chunks(cs.block_count(), resolve_workers(workers), [&](std::size_t b0,
                                                                    std::size_t b1) {
      int idx[SymTensor::kMaxOrder];
      int o[SymTensor::kMaxOrder];
      int src_o[SymTensor::kMaxOrder];
      for (std::size_t r = b0; r < b1; ++r) {
        const BlockInfo& bi = cs.block(r);
        const int* jx = bi.index.data();
        std::fill(o, o + s, 0);
        double* blk = data + bi.offset;
        for (std::size_t pos = 0; pos < bi.volume; ++pos) {
          // canonical means offsets non-decreasing inside runs of equal
          // block coordinate; other entries copy their sorted source,
          // which was visited earlier in the scan.
          bool canonical = true;
          for (int k = 1; k < s; ++k)
            if (jx[k] == jx[k - 1] && o[k] < o[k - 1]) {
              canonical = false;
              break;
            }
          if (canonical) {
            for (int k = 0; k < s; ++k) idx[k] = bi.base[k] + o[k];
            blk[pos] -= correction_sorted(idx, packed, lowerp);
          } else {
            std::copy(o, o + s, src_o);
            for (int a = 0; a < s;) {
              int b = a + 1;
              while (b < s && jx[b] == jx[a]) ++b;
              std::sort(src_o + a, src_o + b);
              a = b;
            }
            std::size_t src = 0;
            for (int k = 0; k < s; ++k)
              src = src * static_cast<std::size_t>(bi.extents[k]) +
                    static_cast<std::size_t>(src_o[k]);
            blk[pos] = blk[src];
          }
          int k = s - 1;
          while (k >= 0 && o[k] == bi.extents[k] - 1) o[k--] = 0;
          if (k < 0) break;
          ++o[k];
        }
      }
    });
    out.tensors.push_back(std::move(cs));
  }
  return out;
}

CumulantSeries cumulant_series(const DataBatch& x, int max_order, int block_size,
                               int workers) {
  return moms2cums(moment_series(x, max_order, block_size, workers), workers);
}

}  // namespace cumstream
