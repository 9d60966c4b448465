#pragma once

#include <map>
#include <vector>

#include "fanostab/bigint.hpp"
#include "fanostab/partition.hpp"

namespace fano::weyl {

/// A GL(m) weight: m integers. Dominant means weakly decreasing.
using Weight = std::vector<int>;

/// Result of the dotted Weyl action on one irreducible summand: either no
/// cohomology at all, or a single degree carrying a positive dimension.
struct CohomologyClass {
    bool zero = true;
    int degree = -1;
    BigInt dim = 0;

    static CohomologyClass none() { return {}; }
    static CohomologyClass at(int degree, BigInt dim) {
        return {false, degree, std::move(dim)};
    }
};

/// Dimension of the irreducible GL(m) representation with highest weight w.
/// Evaluated as an exact integer: the product of all numerator factors
/// (w_i - w_j + j - i) is formed first and divided once by the superfactorial
/// denominator, so no intermediate rounding can occur.
///
/// Throws std::invalid_argument if w is not weakly decreasing.
BigInt weyl_dimension(const Weight& w);

/// Borel-Weil-Bott for an irreducible homogeneous bundle given by the weight
/// w of length m = rank of the ambient group. Adds rho = (m-1,...,1,0); a
/// repeated entry means the weight is singular and every cohomology group
/// vanishes. Otherwise cohomology sits in the single degree equal to the
/// number of inversions of w + rho, with dimension given by the dominant
/// representative sort_desc(w + rho) - rho.
CohomologyClass bwb(const Weight& w);

/// Dimension of the Grassmannian G(k,n) of k-planes in P^n.
int grassmann_dim(int k, int n);

/// Degree of G(k,n) under the Pluecker embedding (standard-tableau count on
/// the (k+1) x (n-k) rectangle).
BigInt grassmann_degree(int k, int n);

/// Schur-functor decomposition of Omega^q(t) on G(k,n): one GL(n+1) weight
/// per partition of q inside a (k+1) x (n-k) box. The weight concatenates a
/// block for the quotient bundle and a block for the subbundle, the twist
/// absorbed into the subbundle block.
std::vector<Weight> omega_decompose(int k, int n, int q, int t);

/// Full cohomology of Omega^q(t) on G(k,n): degree -> dimension, omitting
/// zero entries. Projective space is G(0,n).
std::map<int, BigInt> grassmann_cohomology(int k, int n, int q, int t);

/// Single cell h^p(G(k,n), Omega^q(t)).
BigInt hodge_cell(int k, int n, int p, int q, int t);

/// Betti number b_i of G(k,n), as the sum of h^{p,q} over p+q = i.
BigInt grassmann_betti(int k, int n, int i);

/// Closed-form nonvanishing criterion for H^p(G(1,n), Omega^q(t)) on the
/// Grassmannian of lines: true exactly when one of the five arithmetic
/// conditions holds. Round-up/round-down conventions are exactly those of
/// the source criterion; the BWB path above serves as its independent oracle.
bool lemma01_nonvanishing(int n, int p, int q, int t);

} // namespace fano::weyl
