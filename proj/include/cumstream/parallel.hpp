#pragma once

// Tiny fixed-fanout helper: split [0, n) into contiguous chunks, one
// thread per chunk.  Callers are responsible for making chunks disjoint
// in memory; there is no reduction step.

#include <cstddef>
#include <functional>

namespace cumstream {

// Worker count actually used: the CUMSTREAM_WORKERS environment variable
// if set to a positive integer, else `requested` if positive, else the
// hardware concurrency.
int resolve_workers(int requested);

// fn(begin, end) over a contiguous split of [0, n) into at most `workers`
// chunks.  Runs inline when one chunk suffices.
void parallel_chunks(std::size_t n, int workers,
                     const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace cumstream
