// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace tdsc {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using IndexList = std::vector<std::size_t>;

enum class Standard { WiMAX, LTE };

enum class Hypothesis { H0, H1 };

const char* to_string(Standard standard);
Standard parse_standard(const std::string& text);

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace tdsc
