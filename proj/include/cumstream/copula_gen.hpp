#pragma once

// Synthetic streams for the change-detection experiment: first a Gaussian
// window, then batches from a t-Student copula with the same Gaussian
// marginals, so every change sits in the dependence structure alone.
//
// Stream ids: 0 seeds the random covariance draw, batch k >= 0 of a
// generator run uses stream k + 1.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "cumstream/moments.hpp"
#include "cumstream/stream.hpp"

namespace cumstream {

struct GenConfig {
  int dim = 0;                   // n
  std::size_t window_len = 0;    // t, rows of the opening Gaussian batch
  std::size_t update_len = 0;    // t_up, rows of each later batch
  int windows = 1;               // w_max, total number of batches
  double copula_dof = 10.0;      // nu of the t copula
  std::uint64_t seed = 0;
  std::vector<double> mu;        // per-column mean; empty = zeros
  std::vector<double> sigma;     // n x n covariance; empty = random draw

  void validate() const;  // throws std::invalid_argument
};

// Lower-triangular Cholesky factor of a symmetric positive-definite
// matrix, row-major.  Throws std::domain_error when not positive definite.
std::vector<double> cholesky(const std::vector<double>& m, int n);

// Random covariance with unit diagonal: A A^T normalized, A an n x n
// matrix of standard normals drawn from stream 0 of `seed`.
std::vector<double> random_correlation(int n, std::uint64_t seed);

// `rows` samples of N(mu, sigma), using stream `stream` of cfg.seed.
DataBatch gaussian_batch(const GenConfig& cfg, std::size_t rows, std::uint64_t stream);

// `rows` samples with N(mu_i, sigma_ii) marginals coupled by a t copula
// with cfg.copula_dof degrees of freedom and the correlation of sigma.
DataBatch tcopula_batch(const GenConfig& cfg, std::size_t rows, std::uint64_t stream);

// The experiment stream: one Gaussian window batch followed by
// cfg.windows - 1 copula update batches, then drained.
class ExperimentStream : public BatchSource {
 public:
  explicit ExperimentStream(GenConfig cfg);

  std::optional<DataBatch> next(std::size_t rows) override;

  const GenConfig& config() const noexcept { return cfg_; }

 private:
  GenConfig cfg_;
  int emitted_ = 0;
};

}  // namespace cumstream
