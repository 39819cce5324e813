#pragma once

#include <random>
#include <string>

#include "swrect/io/plant_file.hpp"

namespace fixtures {

inline std::string data_path(const std::string& rel) { return std::string(SWRECT_DATA_DIR) + "/" + rel; }

/// Seven states, five inputs, three outputs.
inline const swrect::io::PlantFile& three_output() {
  static const swrect::io::PlantFile f = swrect::io::load_plant_file(data_path("plants/nonovershoot_3out.json"));
  return f;
}

/// Same subsystem family trimmed to two outputs.
inline const swrect::io::PlantFile& two_output() {
  static const swrect::io::PlantFile f = swrect::io::load_plant_file(data_path("plants/monotonic_2out.json"));
  return f;
}

inline Eigen::MatrixXd gaussian(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i) m(i, j) = g(rng);
  return m;
}

/// Random orthogonal matrix from the QR factor of a Gaussian matrix.
inline Eigen::MatrixXd random_orthogonal(std::mt19937_64& rng, Eigen::Index n) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian(rng, n, n));
  return qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
}

}  // namespace fixtures
