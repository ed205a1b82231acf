#pragma once

// JSON form of block tensors and cumulant series, for dumps and fixtures.
// Blocks appear in storage (lexicographic) order, each as a flat array in
// C order.

#include <iosfwd>
#include <string>

#include "cumstream/cumulants.hpp"
#include "cumstream/symten.hpp"

namespace cumstream {

std::string to_json(const SymTensor& t, int indent = -1);
SymTensor sym_tensor_from_json(std::istream& in);
SymTensor sym_tensor_from_json(const std::string& text);

// {"window": w, "rows": t, "tensors": [...]}, tensors by ascending order.
std::string to_json(const CumulantSeries& c, std::uint64_t window, int indent = -1);

}  // namespace cumstream
