#include "cumstream/gauge.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "json.hpp"

namespace cumstream {

namespace {

constexpr int kMaxBell = 25;  // B(25) still fits in 64 bits

struct ColumnMoments {
  double m1, m2, m3, m4;
};

ColumnMoments raw_column_moments(const DataBatch& x, std::size_t col) {
  double m1 = 0, m2 = 0, m3 = 0, m4 = 0;
  for (std::size_t r = 0; r < x.rows; ++r) {
    const double v = x.at(r, col);
    const double v2 = v * v;
    m1 += v;
    m2 += v2;
    m3 += v2 * v;
    m4 += v2 * v2;
  }
  const double inv = 1.0 / static_cast<double>(x.rows);
  return {m1 * inv, m2 * inv, m3 * inv, m4 * inv};
}

}  // namespace

double nu(const CumulantSeries& c, int d) {
  if (d < 3 || d > c.max_order())
    throw std::invalid_argument("nu: order must be in [3, max_order]");
  const double n2 = knorm(c.order(2), 2.0);
  if (n2 <= 0.0) throw std::domain_error("nu: vanishing second-order cumulant norm");
  return knorm(c.order(d), 2.0) / std::pow(n2, 0.5 * static_cast<double>(d));
}

double max_abs_univariate(const DataBatch& x, UnivariateStat stat) {
  if (x.rows < 4) throw std::invalid_argument("max_abs_univariate: need at least 4 rows");
  double best = 0.0;
  for (std::size_t col = 0; col < x.cols; ++col) {
    const auto [m1, m2, m3, m4] = raw_column_moments(x, col);
    const double mu2 = m2 - m1 * m1;
    if (mu2 <= 0.0) throw std::domain_error("max_abs_univariate: zero-variance column");
    double v;
    if (stat == UnivariateStat::kSkewness) {
      const double mu3 = m3 - 3.0 * m1 * m2 + 2.0 * m1 * m1 * m1;
      v = std::abs(mu3 / std::pow(mu2, 1.5));
    } else {
      const double mu4 =
          m4 - 4.0 * m1 * m3 + 6.0 * m1 * m1 * m2 - 3.0 * m1 * m1 * m1 * m1;
      v = std::abs(mu4 / (mu2 * mu2) - 3.0);
    }
    best = std::max(best, v);
  }
  return best;
}

double max_abs_diag_skewness(const CumulantSeries& c) {
  if (c.max_order() < 3)
    throw std::invalid_argument("max_abs_diag_skewness: needs order 3");
  const SymTensor& c2 = c.order(2);
  const SymTensor& c3 = c.order(3);
  double best = 0.0;
  for (int i = 0; i < c.dim(); ++i) {
    const int i2[2] = {i, i};
    const int i3[3] = {i, i, i};
    const double v2 = c2.at_sorted_unchecked(i2);
    if (v2 <= 0.0) throw std::domain_error("max_abs_diag_skewness: zero variance");
    best = std::max(best, std::abs(c3.at_sorted_unchecked(i3)) / std::pow(v2, 1.5));
  }
  return best;
}

double max_abs_diag_kurtosis(const CumulantSeries& c) {
  if (c.max_order() < 4)
    throw std::invalid_argument("max_abs_diag_kurtosis: needs order 4");
  const SymTensor& c2 = c.order(2);
  const SymTensor& c4 = c.order(4);
  double best = 0.0;
  for (int i = 0; i < c.dim(); ++i) {
    const int i2[2] = {i, i};
    const int i4[4] = {i, i, i, i};
    const double v2 = c2.at_sorted_unchecked(i2);
    if (v2 <= 0.0) throw std::domain_error("max_abs_diag_kurtosis: zero variance");
    best = std::max(best, std::abs(c4.at_sorted_unchecked(i4)) / (v2 * v2));
  }
  return best;
}

std::uint64_t stirling2(int s, int sigma) {
  if (s < 1 || s > kMaxBell) throw std::invalid_argument("stirling2: s must be in [1, 25]");
  if (sigma < 1 || sigma > s) return 0;  // row[0] below is S(0,0), not S(s,0)
  // S(i, j) = S(i-1, j-1) + j * S(i-1, j), one rolling row.
  std::vector<std::uint64_t> row(static_cast<std::size_t>(s) + 1, 0);
  row[0] = 1;  // S(0, 0)
  for (int i = 1; i <= s; ++i) {
    for (int j = i; j >= 1; --j)
      row[j] = row[j - 1] + static_cast<std::uint64_t>(j) * row[j];
    row[0] = 0;  // S(i, 0) vanishes once i >= 1
  }
  return row[sigma];
}

std::uint64_t bell_number(int s) {
  if (s < 1 || s > kMaxBell) throw std::invalid_argument("bell_number: s must be in [1, 25]");
  std::uint64_t total = 0;
  for (int sigma = 1; sigma <= s; ++sigma) total += stirling2(s, sigma);
  return total;
}

double moment_error_bound(int d, std::size_t t, double m_2d) {
  if (d < 1) throw std::invalid_argument("moment_error_bound: order must be positive");
  if (t < 1) throw std::invalid_argument("moment_error_bound: need samples");
  if (m_2d < 0.0) throw std::invalid_argument("moment_error_bound: negative moment bound");
  return std::sqrt(m_2d / static_cast<double>(t));
}

double gaussian_moment_error_bound(int d, std::size_t t) {
  double m = 1.0;  // (2d-1)!!, the standard normal raw moment of order 2d
  for (int k = 3; k <= 2 * d - 1; k += 2) m *= static_cast<double>(k);
  return moment_error_bound(d, t, m);
}

double predicted_speedup(std::size_t t, std::size_t t_up, int d) {
  if (t_up < 1 || t < t_up) throw std::invalid_argument("predicted_speedup: need 1 <= t_up <= t");
  return static_cast<double>(t) /
         (2.0 * static_cast<double>(t_up) + static_cast<double>(bell_number(d)));
}

double predicted_moment_speedup(std::size_t t, std::size_t t_up) {
  if (t_up < 1 || t < t_up)
    throw std::invalid_argument("predicted_moment_speedup: need 1 <= t_up <= t");
  return static_cast<double>(t) / (2.0 * static_cast<double>(t_up));
}

WindowReport make_window_report(std::uint64_t window, const CumulantSeries& c) {
  if (c.max_order() < 2)
    throw std::invalid_argument("make_window_report: needs orders up to 2");
  WindowReport rep;
  rep.window = window;
  rep.rows = c.window_len;
  rep.norm_c1 = knorm(c.order(1), 2.0);
  rep.norm_c2 = knorm(c.order(2), 2.0);
  for (int o = 3; o <= c.max_order(); ++o) rep.nu[o] = nu(c, o);
  if (c.max_order() >= 3) rep.max_abs_skewness = max_abs_diag_skewness(c);
  if (c.max_order() >= 4) rep.max_abs_kurtosis = max_abs_diag_kurtosis(c);
  return rep;
}

std::string report_json_line(const WindowReport& report) {
  nlohmann::ordered_json j;
  j["window"] = report.window;
  j["rows"] = report.rows;
  j["norm_c1"] = report.norm_c1;
  j["norm_c2"] = report.norm_c2;
  nlohmann::ordered_json nus = nlohmann::ordered_json::object();
  for (const auto& [order, value] : report.nu) nus[std::to_string(order)] = value;
  j["nu"] = std::move(nus);
  if (report.max_abs_skewness) j["max_abs_skewness"] = *report.max_abs_skewness;
  if (report.max_abs_kurtosis) j["max_abs_kurtosis"] = *report.max_abs_kurtosis;
  return j.dump();
}

}  // namespace cumstream
