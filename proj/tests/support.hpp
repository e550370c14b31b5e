#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "riskdyn/data_model.hpp"
#include "riskdyn/error.hpp"
#include "riskdyn/random.hpp"

#ifndef RISKDYN_TEST_DATA_DIR
#define RISKDYN_TEST_DATA_DIR "tests/data"
#endif

namespace riskdyn::test {

inline std::filesystem::path fixture_path() {
  return std::filesystem::path(RISKDYN_TEST_DATA_DIR) / "synthetic_20.csv";
}

template <typename F>
ErrorCode error_code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  throw std::runtime_error("expected riskdyn::Error");
}

inline CountryYearRecord make_record(std::string country, int year, double wri, double exposure = 1.0,
                                     double vulnerability = 1.0, double susceptibility = 1.0,
                                     double lack_coping = 1.0, double lack_adaptive = 1.0) {
  CountryYearRecord r;
  r.region = country;
  r.country = std::move(country);
  r.year = year;
  r.wri = wri;
  r.exposure = exposure;
  r.vulnerability = vulnerability;
  r.susceptibility = susceptibility;
  r.lack_coping = lack_coping;
  r.lack_adaptive = lack_adaptive;
  r.exposure_cat = "Low";
  r.wri_cat = "Low";
  r.vulnerability_cat = "Low";
  r.susceptibility_cat = "Low";
  return r;
}

inline double normal(Rng& rng) {
  // Box-Muller; the 1 - u keeps the log argument positive.
  const double u = 1.0 - rng.uniform();
  const double v = rng.uniform();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
}

inline Eigen::MatrixXd random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, double lo = -1.0,
                                     double hi = 1.0) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = lo + (hi - lo) * rng.uniform();
  }
  return m;
}

// Two isotropic Gaussian blobs, unit variance, means `separation` apart on axis 0.
// Labels 0 for the first half, 1 for the second.
inline std::pair<Eigen::MatrixXd, std::vector<int>> two_gaussians(std::uint64_t seed, int n, int dims,
                                                                  double separation) {
  Rng rng(seed);
  Eigen::MatrixXd x(n, dims);
  std::vector<int> y(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int label = i < n / 2 ? 0 : 1;
    y[static_cast<std::size_t>(i)] = label;
    for (int j = 0; j < dims; ++j) x(i, j) = normal(rng);
    x(i, 0) += label * separation;
  }
  return {x, y};
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("riskdyn-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace riskdyn::test
