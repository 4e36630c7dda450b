#include "ptrotor/eigensolve.hpp"

#include <complex>
#include <string>

#ifndef lapack_complex_float
#define lapack_complex_float std::complex<float>
#endif
#ifndef lapack_complex_double
#define lapack_complex_double std::complex<double>
#endif
#include <lapacke.h>

#include "ptrotor/error.hpp"

namespace ptrotor {

EigenDecomposition eigen_decompose(Eigen::MatrixXcd matrix, EigenvectorSides sides) {
  const Eigen::Index n = matrix.rows();
  if (n != matrix.cols()) throw Error(ErrorCode::InvalidParameter, "eigen_decompose needs a square matrix");
  if (!matrix.allFinite()) throw Error(ErrorCode::EigenFailure, "matrix has non-finite entries");

  EigenDecomposition out;
  out.values.resize(n);
  const bool want_right = sides != EigenvectorSides::None;
  const bool want_left = sides == EigenvectorSides::Both;
  if (want_right) out.right.resize(n, n);
  if (want_left) out.left.resize(n, n);

  std::complex<double> dummy{};
  const lapack_int ld = static_cast<lapack_int>(n);
  const lapack_int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, want_left ? 'V' : 'N', want_right ? 'V' : 'N', ld, matrix.data(), ld,
      out.values.data(), want_left ? out.left.data() : &dummy, want_left ? ld : 1,
      want_right ? out.right.data() : &dummy, want_right ? ld : 1);
  if (info != 0) {
    throw Error(ErrorCode::EigenFailure,
                "zgeev returned info = " + std::to_string(info) +
                    " (QR iteration failed; reduce N_s * atanh(lambda))");
  }
  return out;
}

}  // namespace ptrotor
