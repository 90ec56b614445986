#pragma once

#include <vector>

#include "minvar/matrix.hpp"
#include "minvar/rng.hpp"

namespace minvar {

struct SymEig {
  Vector eigenvalues;   // ascending
  Matrix eigenvectors;  // orthonormal columns, column k pairs with eigenvalues[k]
};

// Dense symmetric eigendecomposition. The input must be square and symmetric
// within 1e-10 * max|A|. Eigenvector signs are canonicalized so the entry of
// largest magnitude in each column is positive.
SymEig sym_eig(const Matrix& a);

// Cosines of the principal angles between the column spans of a and b,
// descending, one per min(cols(a), cols(b)). Both inputs must have full
// column rank; the spans (not the particular bases) determine the result.
std::vector<double> principal_angle_cosines(const Matrix& a, const Matrix& b,
                                            const char* name_a = "A",
                                            const char* name_b = "B");

// Orthonormal basis of the column span via QR; throws RankError (naming
// `name`) when the input is column-rank-deficient.
Matrix orthonormal_columns(const Matrix& a, const char* name);

// Haar-ish random orthogonal matrix, deterministic in the rng state.
Matrix random_orthogonal(int n, Rng& rng);

}  // namespace minvar
