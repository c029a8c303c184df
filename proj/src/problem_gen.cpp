#include "gama/problem_gen.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace gama {

namespace {

// Stream ids for seed derivation; keeping the streams separate makes the
// draws independent of consumption order elsewhere.
enum : std::uint64_t { kStructureStream = 0, kValueStream = 1, kSampleStream = 2 };

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(stream + 1)));
}

// Distributions are hand-rolled on top of the engine so the byte stream is
// identical across standard libraries.
double next_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0,1)
}

double next_symmetric(std::mt19937_64& rng) {
  return 2.0 * next_unit(rng) - 1.0;  // [-1,1)
}

class NormalStream {
 public:
  explicit NormalStream(std::mt19937_64 rng) : rng_(rng) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - next_unit(rng_);  // (0,1]
    const double u2 = next_unit(rng_);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace

SyntheticProblem generate_synthetic(Eigen::Index p, double sp_pct, std::uint64_t seed) {
  if (p < 2) throw std::invalid_argument("generate_synthetic: p must be >= 2");
  if (!(sp_pct > 0.0 && sp_pct <= 100.0)) {
    throw std::invalid_argument("generate_synthetic: sparsity must be in (0,100]");
  }

  auto structure = make_stream(seed, kStructureStream);
  auto values = make_stream(seed, kValueStream);
  const double keep_prob = sp_pct / 100.0;

  Eigen::MatrixXd raw = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i + 1; j < p; ++j) {
      const double value = next_symmetric(values);
      const bool keep = next_unit(structure) < keep_prob;
      if (keep) {
        raw(i, j) = value;
        raw(j, i) = value;
      }
    }
  }

  SymMatrix omega_raw = SymMatrix::from_matrix(raw);
  const double lambda_min = extreme_eigenvalues(omega_raw).first;
  SymMatrix omega = omega_raw.add_scaled_identity(1.0 - lambda_min);

  auto f = cholesky(omega);
  if (!f) throw NotPositiveDefiniteError("generated precision is not PD");

  SyntheticProblem problem;
  problem.omega = std::move(omega);
  problem.sigma = inverse(*f);
  problem.p = p;
  problem.target_sparsity_pct = sp_pct;
  problem.seed = seed;
  return problem;
}

Eigen::MatrixXd sample_gaussian(const SyntheticProblem& problem, Eigen::Index n,
                                std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_gaussian: n must be >= 1");
  auto f = cholesky(problem.sigma);
  if (!f) throw NotPositiveDefiniteError("sigma is not positive definite");
  const Eigen::MatrixXd& chol_lower = f->lower();
  const Eigen::Index p = problem.p;

  NormalStream normals(make_stream(seed, kSampleStream));
  Eigen::MatrixXd data(n, p);
  Eigen::VectorXd zrow(p);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < p; ++c) zrow(c) = normals.next();
    data.row(r) = (chol_lower * zrow).transpose();
  }
  return data;
}

SymMatrix sample_covariance(const Eigen::MatrixXd& data, Divisor divisor) {
  const Eigen::Index n = data.rows();
  const Eigen::Index min_rows = divisor == Divisor::N ? 1 : 2;
  if (n < min_rows) {
    throw std::invalid_argument("sample_covariance: not enough rows for divisor");
  }
  const Eigen::MatrixXd centered = data.rowwise() - data.colwise().mean();
  const double d = static_cast<double>(divisor == Divisor::N ? n : n - 1);
  return SymMatrix::from_matrix(centered.transpose() * centered / d);
}

}  // namespace gama
