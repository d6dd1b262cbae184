#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace qvi {

/// Seeded sampling configuration shared by the estimators and checks.
///
/// `trials` is the number of sampled (x, y, z) tuples or pairs for a check;
/// `probes` is the number of probe points used inside a single Hausdorff
/// estimate. `scale` is the standard deviation of far-field Gaussian draws.
struct SamplerConfig {
  std::uint64_t seed = 20240521;
  std::size_t trials = 10000;
  std::size_t probes = 10000;
  double scale = 10.0;
};

using Rng = std::mt19937_64;

inline Eigen::VectorXd gaussian_point(Rng& rng, const Eigen::VectorXd& center,
                                      double scale) {
  std::normal_distribution<double> normal(0.0, scale);
  Eigen::VectorXd out(center.size());
  for (Eigen::Index i = 0; i < center.size(); ++i) out[i] = center[i] + normal(rng);
  return out;
}

}  // namespace qvi
