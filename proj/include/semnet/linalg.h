// Copyright 2026 The Semnet Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SEMNET_LINALG_H_
#define SEMNET_LINALG_H_

#include <cmath>

#include <Eigen/Dense>

namespace semnet {

enum class Distance { kL1, kL2 };

// d(x, 0) under the chosen norm.
template <typename Derived>
typename Derived::Scalar NormOf(const Eigen::MatrixBase<Derived> &x,
                                Distance distance) {
  return distance == Distance::kL1 ? x.template lpNorm<1>() : x.norm();
}

// Subgradient of NormOf with respect to x. Zero at the kinks.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> NormGradient(
    const Eigen::MatrixBase<Derived> &x, Distance distance) {
  using Scalar = typename Derived::Scalar;
  if (distance == Distance::kL1) {
    return x.unaryExpr([](Scalar v) {
      return v > Scalar(0) ? Scalar(1) : (v < Scalar(0) ? Scalar(-1) : Scalar(0));
    });
  }
  const Scalar n = x.norm();
  if (n == Scalar(0)) {
    return Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(x.size());
  }
  return x / n;
}

// Numerically stable softmax of a column vector.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> Softmax(
    const Eigen::MatrixBase<Derived> &logits) {
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> p =
      (logits.array() - logits.maxCoeff()).exp().matrix();
  return p / p.sum();
}

// Cosine similarity; 0 when either vector is all zeros.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar Cosine(const Eigen::MatrixBase<DerivedA> &a,
                                 const Eigen::MatrixBase<DerivedB> &b) {
  using Scalar = typename DerivedA::Scalar;
  const Scalar na = a.squaredNorm();
  const Scalar nb = b.squaredNorm();
  if (na == Scalar(0) || nb == Scalar(0)) return Scalar(0);
  return a.dot(b) / std::sqrt(na * nb);
}

}  // namespace semnet

#endif  // SEMNET_LINALG_H_
