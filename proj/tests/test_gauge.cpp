#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "cumstream/cumulants.hpp"
#include "cumstream/gauge.hpp"
#include "cumstream/symten.hpp"
#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"

using namespace cumstream;

namespace {

// Series with given dense univariate cumulant values c[k] of order k+1.
CumulantSeries univariate_series(const std::vector<double>& c) {
  CumulantSeries out;
  out.window_len = 1;
  for (std::size_t s = 0; s < c.size(); ++s) {
    DenseTensor d(static_cast<int>(s) + 1, 1);
    d.values[0] = c[s];
    out.tensors.push_back(from_dense(d, 1));
  }
  return out;
}

}  // namespace

TEST_CASE("nu is the normalized cumulant norm") {
  const CumulantSeries c = univariate_series({0.0, 4.0, -16.0});
  CHECK(nu(c, 3) == 2.0);  // 16 / 4^1.5

  const CumulantSeries gaussian = univariate_series({0.3, 1.7, 0.0, 0.0});
  CHECK(nu(gaussian, 3) == 0.0);
  CHECK(nu(gaussian, 4) == 0.0);

  const CumulantSeries flat = univariate_series({1.0, 0.0, 2.0});
  CHECK_THROWS_AS(nu(flat, 3), std::domain_error);
  CHECK_THROWS_AS(nu(c, 2), std::invalid_argument);
  CHECK_THROWS_AS(nu(c, 4), std::invalid_argument);
}

TEST_CASE("univariate nu equals the classic standardized moments") {
  std::mt19937_64 rng(42);
  DataBatch x = oracles::random_batch(500, 1, rng);
  for (std::size_t r = 0; r < x.rows; ++r) x.values[r] = std::exp(0.4 * x.values[r]);

  const CumulantSeries c = cumulant_series(x, 4, 1);
  CHECK(nu(c, 3) == doctest::Approx(max_abs_univariate(x, UnivariateStat::kSkewness))
                        .epsilon(1e-12));
  CHECK(nu(c, 4) == doctest::Approx(max_abs_univariate(x, UnivariateStat::kKurtosis))
                        .epsilon(1e-12));
}

TEST_CASE("nu matches a dense evaluation of the same ratio") {
  std::mt19937_64 rng(12);
  const DataBatch x = oracles::random_batch(300, 5, rng);
  const CumulantSeries c = cumulant_series(x, 4, 2);
  for (int d : {3, 4}) {
    const double dense = oracles::naive_knorm(densify(c.order(d)), 2.0) /
                         std::pow(oracles::naive_knorm(densify(c.order(2)), 2.0), 0.5 * d);
    CHECK(nu(c, d) == doctest::Approx(dense).epsilon(1e-12));
  }
}

TEST_CASE("column extremes from raw data") {
  SUBCASE("ramp column has the discrete-uniform kurtosis") {
    DataBatch x;
    x.cols = 1;
    x.rows = 10;
    for (int i = 1; i <= 10; ++i) x.values.push_back(i);
    CHECK(max_abs_univariate(x, UnivariateStat::kSkewness) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(max_abs_univariate(x, UnivariateStat::kKurtosis) ==
          doctest::Approx(1.2242424242424241).epsilon(1e-12));

    DataBatch big;
    big.cols = 1;
    big.rows = 10000;
    for (int i = 1; i <= 10000; ++i) big.values.push_back(i);
    CHECK(max_abs_univariate(big, UnivariateStat::kKurtosis) ==
          doctest::Approx(1.2).epsilon(1e-5));
  }

  SUBCASE("the maximum ranges over columns") {
    std::mt19937_64 rng(21);
    DataBatch x = oracles::random_batch(400, 3, rng);
    for (std::size_t r = 0; r < x.rows; ++r) x.row(r)[2] = std::exp(x.row(r)[2]);

    double worst_skew = 0.0, worst_kurt = 0.0;
    for (int col = 0; col < 3; ++col) {
      DataBatch one;
      one.rows = x.rows;
      one.cols = 1;
      for (std::size_t r = 0; r < x.rows; ++r) one.values.push_back(x.at(r, col));
      worst_skew = std::max(worst_skew, max_abs_univariate(one, UnivariateStat::kSkewness));
      worst_kurt = std::max(worst_kurt, max_abs_univariate(one, UnivariateStat::kKurtosis));
    }
    CHECK(max_abs_univariate(x, UnivariateStat::kSkewness) == doctest::Approx(worst_skew));
    CHECK(max_abs_univariate(x, UnivariateStat::kKurtosis) == doctest::Approx(worst_kurt));

    const CumulantSeries c = cumulant_series(x, 4, 2);
    CHECK(max_abs_diag_skewness(c) == doctest::Approx(worst_skew).epsilon(1e-10));
    CHECK(max_abs_diag_kurtosis(c) == doctest::Approx(worst_kurt).epsilon(1e-10));
  }

  SUBCASE("degenerate input is refused") {
    DataBatch x;
    x.rows = 3;
    x.cols = 1;
    x.values = {1.0, 2.0, 3.0};
    CHECK_THROWS_AS(max_abs_univariate(x, UnivariateStat::kSkewness), std::invalid_argument);
    DataBatch flat;
    flat.rows = 5;
    flat.cols = 2;
    flat.values.assign(10, 2.5);
    CHECK_THROWS_AS(max_abs_univariate(flat, UnivariateStat::kKurtosis), std::domain_error);
  }
}

TEST_CASE("closed-form predictors") {
  CHECK(moment_error_bound(1, 100, 1.0) == 0.1);
  CHECK(gaussian_moment_error_bound(4, 1000000) ==
        doctest::Approx(0.010246950765959599).epsilon(1e-15));  // sqrt(7!!/1e6)
  CHECK(moment_error_bound(4, 1000000, 105.0) ==
        gaussian_moment_error_bound(4, 1000000));
  CHECK(gaussian_moment_error_bound(4, 1u << 30) < 1e-3);

  CHECK(predicted_speedup(1000000, 25000, 4) ==
        doctest::Approx(19.99400179946016).epsilon(1e-15));  // t / (2 t_up + B(4))
  CHECK(predicted_moment_speedup(1000000, 50000) == 10.0);
  CHECK(predicted_speedup(1000000, 500000, 4) == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(predicted_speedup(100000, 5000, 4) > predicted_speedup(100000, 10000, 4));
}

TEST_CASE("big Bell and Stirling values stay exact") {
  CHECK(stirling2(10, 5) == 42525);
  CHECK(stirling2(12, 1) == 1);
  CHECK(stirling2(12, 12) == 1);
  CHECK(stirling2(12, 0) == 0);
  CHECK(stirling2(3, 7) == 0);
  CHECK(bell_number(10) == 115975);
  CHECK(bell_number(20) == 51724158235372ull);
  CHECK_THROWS_AS(stirling2(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(bell_number(26), std::invalid_argument);
}

TEST_CASE("scaling the data moves norms by the order power and nu not at all") {
  std::mt19937_64 rng(33);
  const DataBatch x = oracles::random_batch(120, 3, rng);
  DataBatch scaled = x;
  for (double& v : scaled.values) v *= 2.0;

  const CumulantSeries plain = cumulant_series(x, 4, 2);
  const CumulantSeries big = cumulant_series(scaled, 4, 2);
  for (int s = 2; s <= 4; ++s)
    CHECK(knorm(big.order(s), 2.0) == std::pow(2.0, s) * knorm(plain.order(s), 2.0));
  CHECK(nu(big, 3) == doctest::Approx(nu(plain, 3)).epsilon(1e-13));
  CHECK(nu(big, 4) == doctest::Approx(nu(plain, 4)).epsilon(1e-13));
}

TEST_CASE("window reports carry the gauge values") {
  std::mt19937_64 rng(64);
  const DataBatch x = oracles::random_batch(250, 4, rng);
  const CumulantSeries c = cumulant_series(x, 4, 2);
  const WindowReport rep = make_window_report(7, c);

  CHECK(rep.window == 7);
  CHECK(rep.rows == 250);
  CHECK(rep.norm_c1 == knorm(c.order(1), 2.0));
  CHECK(rep.norm_c2 == knorm(c.order(2), 2.0));
  REQUIRE(rep.nu.size() == 2);
  CHECK(rep.nu.at(3) == nu(c, 3));
  CHECK(rep.nu.at(4) == nu(c, 4));
  REQUIRE(rep.max_abs_skewness.has_value());
  REQUIRE(rep.max_abs_kurtosis.has_value());
  CHECK(*rep.max_abs_skewness == max_abs_diag_skewness(c));
  CHECK(*rep.max_abs_kurtosis == max_abs_diag_kurtosis(c));

  const auto j = nlohmann::json::parse(report_json_line(rep));
  CHECK(j.at("window") == 7);
  CHECK(j.at("rows") == 250);
  CHECK(j.at("norm_c1").get<double>() == rep.norm_c1);
  CHECK(j.at("norm_c2").get<double>() == rep.norm_c2);
  CHECK(j.at("nu").at("3").get<double>() == rep.nu.at(3));
  CHECK(j.at("nu").at("4").get<double>() == rep.nu.at(4));
  CHECK(j.at("max_abs_skewness").get<double>() == *rep.max_abs_skewness);
  CHECK(j.at("max_abs_kurtosis").get<double>() == *rep.max_abs_kurtosis);

  SUBCASE("optional fields drop out at low order") {
    const CumulantSeries c2 = cumulant_series(x, 2, 2);
    const WindowReport r2 = make_window_report(1, c2);
    CHECK(r2.nu.empty());
    CHECK(!r2.max_abs_skewness.has_value());
    CHECK(!r2.max_abs_kurtosis.has_value());
    const auto j2 = nlohmann::json::parse(report_json_line(r2));
    CHECK(j2.at("nu").empty());
    CHECK(!j2.contains("max_abs_skewness"));
    CHECK(!j2.contains("max_abs_kurtosis"));

    const CumulantSeries c3 = cumulant_series(x, 3, 2);
    const WindowReport r3 = make_window_report(1, c3);
    CHECK(r3.nu.size() == 1);
    CHECK(r3.max_abs_skewness.has_value());
    CHECK(!r3.max_abs_kurtosis.has_value());
  }
}
