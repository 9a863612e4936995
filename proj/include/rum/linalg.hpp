#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "rum/errors.hpp"

namespace rum {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Throws StructuralError on NaN/Inf entries.
void check_finite(const ComplexMatrix& m, const char* what = "matrix");

// Largest singular value; 0 for matrices with an empty dimension.
double spectral_norm(const ComplexMatrix& m);

// Smallest singular value (min over min(rows,cols) values); 0 when rows == 0.
double smallest_singular_value(const ComplexMatrix& m);

/// Orthonormal basis of the numerical kernel. A singular value sigma counts
/// as zero when sigma <= tol * max(1, sigma_max). Result has one column per
/// kernel dimension and may have zero columns.
ComplexMatrix numeric_kernel(const ComplexMatrix& m, double tol = 1e-9);

struct Eigenspace {
    std::complex<double> eigenvalue;  // on the unit circle
    ComplexMatrix basis;              // orthonormal columns
};

/// Eigendecomposition of a unitary matrix. Eigenvalues closer than
/// cluster_tol in angle are merged into a single eigenspace. Output is
/// sorted by angle in [0, 2pi) and the eigenspace dimensions sum to the
/// matrix dimension. Throws ContractError when U is not unitary.
std::vector<Eigenspace> unitary_eigendecomposition(const ComplexMatrix& u,
                                                   double cluster_tol = 1e-8);

struct JointEigenpair {
    ComplexVector lambda;    // one unit-modulus entry per operator in the tuple
    ComplexMatrix eigenspace;  // orthonormal columns, joint eigenvectors
};

/// Joint spectrum of a tuple of pairwise commuting unitaries, by recursive
/// splitting of invariant subspaces: decompose the first operator, restrict
/// the remaining ones to each eigenspace, recurse. Eigenspaces of the result
/// are mutually orthogonal and together span the whole space.
/// Throws ContractError when inputs are not unitary or do not commute.
std::vector<JointEigenpair> joint_spectrum(const std::vector<ComplexMatrix>& tuple,
                                           double cluster_tol = 1e-8);

// Householder-orthonormalized copy of the (full column rank) input.
ComplexMatrix orthonormalize(const ComplexMatrix& m);

}  // namespace rum
