#pragma once

// Headerless numeric CSV, comma separated, one sample per row.  Values
// are written with enough digits to round-trip doubles exactly.

#include <cstddef>
#include <iosfwd>
#include <string>

#include "cumstream/moments.hpp"
#include "cumstream/stream.hpp"

namespace cumstream {

// Reads batches of rows with `cols` columns.  Throws std::runtime_error
// on rows with the wrong arity or unparsable fields (the message carries
// the 1-based line number).  Blank lines are ignored.  With skip_header
// the first line is consumed unparsed; error line numbers stay physical.
class CsvBatchSource : public BatchSource {
 public:
  CsvBatchSource(std::istream& in, std::size_t cols, bool skip_header = false);

  std::optional<DataBatch> next(std::size_t rows) override;

 private:
  std::istream& in_;
  std::size_t cols_ = 0;
  std::size_t line_ = 0;
  bool drained_ = false;
};

void write_csv(std::ostream& out, const DataBatch& x);

}  // namespace cumstream
