#pragma once

#include <Eigen/Dense>

namespace ptrotor {

enum class EigenvectorSides { None, Right, Both };

/// Eigen-data of a dense general complex matrix. Column k of `right` solves
/// A v = mu_k v; column k of `left` solves u^H A = mu_k u^H. Vectors are
/// returned with unit Euclidean norm.
struct EigenDecomposition {
  Eigen::VectorXcd values;
  Eigen::MatrixXcd right;
  Eigen::MatrixXcd left;
};

/// Hessenberg reduction + shifted QR (LAPACK zgeev). Throws EigenFailure when
/// the QR iteration does not converge.
EigenDecomposition eigen_decompose(Eigen::MatrixXcd matrix, EigenvectorSides sides);

}  // namespace ptrotor
