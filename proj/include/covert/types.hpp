#pragma once

#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/Dense>

namespace covert {

using cdouble = std::complex<double>;

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using CRow = Eigen::RowVectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846;

/// dBm -> W. `-inf` maps to 0 W.
inline double dbm_to_watt(double dbm) {
  if (dbm == -kInf) return 0.0;
  return std::pow(10.0, (dbm - 30.0) / 10.0);
}

inline double watt_to_dbm(double w) {
  if (w <= 0.0) return -kInf;
  return 10.0 * std::log10(w) + 30.0;
}

/// Power ratio in dB -> linear.
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

}  // namespace covert
