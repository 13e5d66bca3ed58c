#pragma once

#include <utility>
#include <vector>

#include "flagattr/complex_matrix.hpp"
#include "flagattr/errors.hpp"

namespace flagattr::numerics {

// Tolerances shared across the library.
inline constexpr double kOrthTol = 1e-10;       // unitarity / orthonormality
inline constexpr double kReconTol = 1e-9;       // relative reconstruction residual
inline constexpr double kEigGroupRel = 1e-8;    // eigenvalue grouping, relative to max |lambda|
inline constexpr double kDefaultRankTol = 1e-9; // relative singular value cutoff
inline constexpr int kJacobiSweepBudget = 100;

// Spectral decomposition of a Hermitian matrix: eigenvalues sorted descending,
// an orthonormal eigenbasis in the columns of `eigenvectors`, and half-open
// column ranges grouping eigenvalues that agree within the grouping tolerance.
struct HermitianSpectrum {
    std::vector<double> eigenvalues;
    ComplexMatrix eigenvectors;
    std::vector<std::pair<int, int>> multiplicity_blocks;

    int dim() const { return static_cast<int>(eigenvalues.size()); }

    // U diag(lambda) U* v
    CVec apply(const CVec& v) const;

    // Orthonormal basis of the eigenspace for block b (columns copied out).
    ComplexMatrix block_basis(int b) const;

    double block_eigenvalue(int b) const { return eigenvalues[multiplicity_blocks[b].first]; }
    int block_count() const { return static_cast<int>(multiplicity_blocks.size()); }
};

// Cyclic Jacobi diagonalization.  `tol` bounds the allowed deviation
// max |m - m*| from exact hermiticity.
HermitianSpectrum hermitian_eigendecompose(const ComplexMatrix& m, double tol = 1e-9);

// All singular values, descending, computed from the Hermitian embedding
// [[0, m], [m*, 0]] with the same Jacobi kernel.
std::vector<double> singular_values(const ComplexMatrix& m);

// Number of singular values exceeding tol_rel times the largest one.
// The zero matrix has rank 0.
int numerical_rank(const ComplexMatrix& m, double tol_rel = kDefaultRankTol);

// Rank against an externally supplied scale (used when the matrix is a block
// of an orthonormal frame, whose natural scale is 1 even if the block itself
// is negligible).
int rank_with_scale(const ComplexMatrix& m, double tol_rel, double scale);

// Same as rank_with_scale but refuses to decide when any singular value falls
// inside the ambiguity band [0.1*tol, 10*tol] around the threshold.
int checked_rank_with_scale(const ComplexMatrix& m, double tol_rel, double scale);

// Gram-Schmidt with reorthogonalization.  Column i of the result spans the
// same prefix space as columns 0..i of the input.  Requires full column rank.
ComplexMatrix orthonormalize(const ComplexMatrix& m);

// Largest canonical angle between the column spans of two orthonormal bases
// of equal dimension.
double max_principal_angle(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace flagattr::numerics
