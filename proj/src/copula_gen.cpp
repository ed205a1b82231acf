#include "cumstream/copula_gen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cumstream/mathfn.hpp"
#include "cumstream/rng.hpp"

namespace cumstream {

namespace {

// Largest double below 1; copula uniforms are clamped into (0, 1) before
// the quantile transform.
const double kBelowOne = std::nextafter(1.0, 0.0);

std::vector<double> correlation_of(const std::vector<double>& sigma, int n) {
  std::vector<double> r(sigma.size());
  for (int i = 0; i < n; ++i) {
    const double di = sigma[static_cast<std::size_t>(i) * n + i];
    if (!(di > 0.0)) throw std::domain_error("copula: covariance diagonal must be positive");
    for (int j = 0; j < n; ++j) {
      const double dj = sigma[static_cast<std::size_t>(j) * n + j];
      r[static_cast<std::size_t>(i) * n + j] =
          sigma[static_cast<std::size_t>(i) * n + j] / std::sqrt(di * dj);
    }
  }
  return r;
}

std::vector<double> effective_sigma(const GenConfig& cfg) {
  if (!cfg.sigma.empty()) return cfg.sigma;
  return random_correlation(cfg.dim, cfg.seed);
}

double mean_at(const GenConfig& cfg, int i) {
  return cfg.mu.empty() ? 0.0 : cfg.mu[static_cast<std::size_t>(i)];
}

}  // namespace

void GenConfig::validate() const {
  if (dim < 1) throw std::invalid_argument("GenConfig: dim must be positive");
  if (window_len < 1) throw std::invalid_argument("GenConfig: window_len must be positive");
  if (windows < 1) throw std::invalid_argument("GenConfig: windows must be positive");
  if (windows > 1 && update_len < 1)
    throw std::invalid_argument("GenConfig: update_len must be positive");
  if (!(copula_dof > 2.0))
    throw std::invalid_argument("GenConfig: copula_dof must exceed 2 (finite covariance)");
  if (!mu.empty() && mu.size() != static_cast<std::size_t>(dim))
    throw std::invalid_argument("GenConfig: mu must have dim entries");
  if (!sigma.empty() && sigma.size() != static_cast<std::size_t>(dim) * dim)
    throw std::invalid_argument("GenConfig: sigma must be dim x dim");
}

std::vector<double> cholesky(const std::vector<double>& m, int n) {
  if (m.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("cholesky: matrix must be n x n");
  std::vector<double> l(m.size(), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double acc = m[static_cast<std::size_t>(i) * n + j];
      for (int k = 0; k < j; ++k)
        acc -= l[static_cast<std::size_t>(i) * n + k] * l[static_cast<std::size_t>(j) * n + k];
      if (i == j) {
        if (!(acc > 0.0)) throw std::domain_error("cholesky: matrix not positive definite");
        l[static_cast<std::size_t>(i) * n + j] = std::sqrt(acc);
      } else {
        l[static_cast<std::size_t>(i) * n + j] = acc / l[static_cast<std::size_t>(j) * n + j];
      }
    }
  }
  return l;
}

std::vector<double> random_correlation(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random_correlation: n must be positive");
  auto rng = Xoshiro256pp::seeded(seed, 0);
  std::vector<double> a(static_cast<std::size_t>(n) * n);
  for (double& v : a) v = rng.normal();
  std::vector<double> s(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k)
        acc += a[static_cast<std::size_t>(i) * n + k] * a[static_cast<std::size_t>(j) * n + k];
      s[static_cast<std::size_t>(i) * n + j] = acc;
      s[static_cast<std::size_t>(j) * n + i] = acc;
    }
  return correlation_of(s, n);
}

DataBatch gaussian_batch(const GenConfig& cfg, std::size_t rows, std::uint64_t stream) {
  cfg.validate();
  if (rows < 1) throw std::invalid_argument("gaussian_batch: rows must be positive");
  const int n = cfg.dim;
  const std::vector<double> l = cholesky(effective_sigma(cfg), n);
  auto rng = Xoshiro256pp::seeded(cfg.seed, stream);

  DataBatch x;
  x.rows = rows;
  x.cols = static_cast<std::size_t>(n);
  x.values.resize(rows * x.cols);
  std::vector<double> z(static_cast<std::size_t>(n));
  for (std::size_t r = 0; r < rows; ++r) {
    for (double& v : z) v = rng.normal();
    double* row = x.row(r);
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j = 0; j <= i; ++j) acc += l[static_cast<std::size_t>(i) * n + j] * z[j];
      row[i] = mean_at(cfg, i) + acc;
    }
  }
  return x;
}

DataBatch tcopula_batch(const GenConfig& cfg, std::size_t rows, std::uint64_t stream) {
  cfg.validate();
  if (rows < 1) throw std::invalid_argument("tcopula_batch: rows must be positive");
  const int n = cfg.dim;
  const std::vector<double> sigma = effective_sigma(cfg);
  const std::vector<double> lr = cholesky(correlation_of(sigma, n), n);
  std::vector<double> sd(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) sd[i] = std::sqrt(sigma[static_cast<std::size_t>(i) * n + i]);
  auto rng = Xoshiro256pp::seeded(cfg.seed, stream);
  const double dof = cfg.copula_dof;

  DataBatch x;
  x.rows = rows;
  x.cols = static_cast<std::size_t>(n);
  x.values.resize(rows * x.cols);
  std::vector<double> z(static_cast<std::size_t>(n));
  for (std::size_t r = 0; r < rows; ++r) {
    for (double& v : z) v = rng.normal();
    const double w = rng.chi_square(dof);
    const double scale = std::sqrt(dof / w);
    double* row = x.row(r);
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j = 0; j <= i; ++j) acc += lr[static_cast<std::size_t>(i) * n + j] * z[j];
      const double y = acc * scale;  // multivariate t with unit scale
      const double u = std::clamp(student_t_cdf(y, dof), 1e-300, kBelowOne);
      row[i] = mean_at(cfg, i) + sd[i] * norm_cdf_inv(u);
    }
  }
  return x;
}

ExperimentStream::ExperimentStream(GenConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
}

std::optional<DataBatch> ExperimentStream::next(std::size_t rows) {
  if (emitted_ >= cfg_.windows) return std::nullopt;
  const int batch = emitted_++;
  if (batch == 0) return gaussian_batch(cfg_, rows, 1);
  return tcopula_batch(cfg_, rows, static_cast<std::uint64_t>(batch) + 1);
}

}  // namespace cumstream
