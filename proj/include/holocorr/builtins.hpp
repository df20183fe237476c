// Copyright (c) 2026 the holocorr authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HOLOCORR_BUILTINS_HPP
#define HOLOCORR_BUILTINS_HPP

#include <string>
#include <vector>

#include "holocorr/correspondence.hpp"

namespace holocorr {

inline const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {
      "square", "sqrt", "chebyshev", "moebius-pair", "nwm22-seeded"};
  return names;
}

/// Named example correspondences. "nwm22-seeded" draws fixed pseudo-random
/// (2,2) coefficients from seed 20240917 through the pinned bit-level
/// uniform, so the graph is identical on every platform.
inline Correspondence<double> builtin_correspondence(const std::string& name) {
  using M = MatrixCx<double>;
  if (name == "square") {  // y - x^2
    M c = M::Zero(3, 2);
    c(0, 1) = 1.0;
    c(2, 0) = -1.0;
    return Correspondence<double>(BihomogeneousPoly<double>(c));
  }
  if (name == "sqrt") {  // y^2 - x
    M c = M::Zero(2, 3);
    c(0, 2) = 1.0;
    c(1, 0) = -1.0;
    return Correspondence<double>(BihomogeneousPoly<double>(c));
  }
  if (name == "chebyshev") {  // y - (x^2 - 2)
    M c = M::Zero(3, 2);
    c(0, 1) = 1.0;
    c(2, 0) = -1.0;
    c(0, 0) = 2.0;
    return Correspondence<double>(BihomogeneousPoly<double>(c));
  }
  if (name == "moebius-pair") {  // (y - x)(y + x) = y^2 - x^2
    M c = M::Zero(3, 3);
    c(0, 2) = 1.0;
    c(2, 0) = -1.0;
    return Correspondence<double>(BihomogeneousPoly<double>(c));
  }
  if (name == "nwm22-seeded") {
    std::mt19937_64 gen(20240917);
    M c(3, 3);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) c(i, j) = uniform_unit_disk(gen);
    }
    return Correspondence<double>(BihomogeneousPoly<double>(c));
  }
  throw ValidationError("unknown builtin correspondence: " + name);
}

}  // namespace holocorr

#endif  // HOLOCORR_BUILTINS_HPP
