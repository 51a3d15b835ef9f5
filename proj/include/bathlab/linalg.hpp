#pragma once

#include "bathlab/types.hpp"

#include <Eigen/Dense>

#include <string>

namespace bathlab {

// Induced L1 -> L1 norm on a uniform-weight grid: the weight-scaled maximum
// absolute column sum max_j sum_i w |A_ij| / w.
double induced_l1_norm(const Eigen::MatrixXd& a);
double induced_l1_norm(const Eigen::MatrixXcd& a);

template <typename Scalar>
struct ExpmResult {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> value;
    std::string method; // "pade3".."pade13" with squarings, or "eigen"
    int squarings = 0;
};

// e^{A} by Pade scaling-and-squaring.
ExpmResult<double> expm(const Eigen::MatrixXd& a);
ExpmResult<cplx> expm(const Eigen::MatrixXcd& a);

// All eigenvalues of a dense matrix (LAPACK geev). Throws NumericalError on failure.
Eigen::VectorXcd eigenvalues(const Eigen::MatrixXd& a);
Eigen::VectorXcd eigenvalues(const Eigen::MatrixXcd& a);

struct EigenDecomposition {
    Eigen::VectorXcd values;
    Eigen::MatrixXcd vectors; // right eigenvectors, columns
};
EigenDecomposition eigendecompose(const Eigen::MatrixXcd& a);

// Reciprocal condition number of a square matrix in the 1-norm (LU based).
double rcond(const Eigen::MatrixXcd& a);

} // namespace bathlab
