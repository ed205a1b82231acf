#pragma once

// Scalar summaries of a cumulant series: the non-Gaussianity gauge
//   nu_d = ||C_d||_2 / ||C_2||_2^(d/2),
// univariate extremes read off the cumulant diagonals, and closed-form
// predictors for estimation error and update speedup.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "cumstream/cumulants.hpp"
#include "cumstream/moments.hpp"

namespace cumstream {

// Norm ratio of order d against the Gaussian scale.  Throws
// std::domain_error when ||C_2|| vanishes.  Pre: 3 <= d <= c.max_order().
double nu(const CumulantSeries& c, int d);

enum class UnivariateStat { kSkewness, kKurtosis };

// Largest |skewness| or |excess kurtosis| over the columns of a sample.
// Pre: x.rows >= 4.  Throws std::domain_error on a zero-variance column.
double max_abs_univariate(const DataBatch& x, UnivariateStat stat);

// Same extremes from the diagonal entries of a cumulant series, so a
// streaming consumer does not have to touch the window buffer.
double max_abs_diag_skewness(const CumulantSeries& c);
double max_abs_diag_kurtosis(const CumulantSeries& c);

std::uint64_t stirling2(int s, int sigma);  // partitions of s into sigma parts
std::uint64_t bell_number(int s);           // all partitions of s

// Upper bound sqrt(m_2d / t) on the standard error of an order-d moment
// estimate from t samples, given the 2d-th raw moment bound m_2d.
double moment_error_bound(int d, std::size_t t, double m_2d);
// The bound with the standard-normal raw moment m_2d = (2d-1)!!.
double gaussian_moment_error_bound(int d, std::size_t t);

// Expected speedup of windowed updates over full recomputation.
double predicted_speedup(std::size_t t, std::size_t t_up, int d);         // cumulants
double predicted_moment_speedup(std::size_t t, std::size_t t_up);        // moments only

struct WindowReport {
  std::uint64_t window = 0;                  // 1-based window index
  std::size_t rows = 0;                      // window length
  double norm_c1 = 0.0;                      // ||C_1||_2
  double norm_c2 = 0.0;                      // ||C_2||_2
  std::map<int, double> nu;                  // order -> nu_order, orders 3..d
  std::optional<double> max_abs_skewness;    // present when d >= 3
  std::optional<double> max_abs_kurtosis;    // present when d >= 4
};

WindowReport make_window_report(std::uint64_t window, const CumulantSeries& c);

// One JSON object per line; keys documented in docs/window_report.schema.json.
std::string report_json_line(const WindowReport& report);

}  // namespace cumstream
