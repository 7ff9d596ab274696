#pragma once

#include "core/lifting.hpp"

#include <cstddef>
#include <vector>

namespace bip {

/// Rank-two matrix in factored form X = U V^T with U m x 2 and V n x 2.
struct RankTwoElement {
    Matrix u_factor;  // m x 2
    Matrix v_factor;  // n x 2

    Matrix to_matrix() const { return u_factor * v_factor.transpose(); }
};

/// Orthonormal bases for the column and row spaces of a rank-two matrix.
struct SubspacePair {
    Matrix col_basis;  // m x 2, orthonormal columns
    Matrix row_basis;  // n x 2, orthonormal columns

    /// Squared projection norm ||P_C x||^2 of an arbitrary vector.
    double col_projection_sq(const Vector& x) const { return (col_basis.transpose() * x).squaredNorm(); }
    double row_projection_sq(const Vector& y) const { return (row_basis.transpose() * y).squaredNorm(); }
};

/// Element of the linear-convolution rank-two null space: with u of length
/// m-1 and v of length n-1,
///
///   X = [ u  0 ] [ 0    v^T ]
///       [ 0 -u ] [ v^T  0   ]
///
/// so X places u v^T on rows 1..m-1 / cols 2..n and -u v^T shifted one step
/// down the anti-diagonals, hence the anti-diagonal sums all cancel.
RankTwoElement conv_rank2_element(const Vector& u, const Vector& v);

/// Extract (column space, row space) bases of a numerically rank-two matrix
/// via SVD. Requires sigma2/sigma1 >= tol and sigma3/sigma1 < tol.
SubspacePair subspace_pair(const Matrix& x, double tol = 1e-8);

struct FamilyPart {
    int i;  // column-side index; parts with equal i share col_basis
    int j;  // row-side index; parts with equal j share row_basis
    SubspacePair pair;
};

enum class FamilyVariant { Finite, ParametricConvolution };

/// Restricted rank-two null space N(S,2) intersected with the conic prior,
/// represented either as a finite list of (column space, row space) pairs or
/// as the parametric convolution generator. Finite parts are stored in
/// lexicographic (i, j) order.
class NullSpaceFamily {
public:
    /// Finite family with no parts (trivial restricted null space).
    static NullSpaceFamily empty(int m, int n);

    /// floor(sqrt(m)) * floor(sqrt(n)) parts; part (i, j), 1-based, has
    /// column space span{e_i, e_{i+1}} and row space span{f_j, f_{j+1}}.
    static NullSpaceFamily biorthogonal(int m, int n);

    /// 2^floor(tau m) * 2^floor(tau n) parts indexed from 0. Part (i, j) is
    /// built from sign words g_i, h_j (binary representation, most
    /// significant bit first, 0 -> -1): with b = floor(tau m) the column
    /// factors are
    ///   c1 = (g_i; 1_{m-b})  and  c2 = (0_b; -g_i; -1_{m-2b}),
    /// i.e. c2 is c1 shifted down by b and negated, and symmetrically on the
    /// row side. The all-ones block lengths follow from conformability.
    static NullSpaceFamily bernoulli(int m, int n, double tau);

    /// Parametric convolution family wrapping conv_rank2_element, with
    /// m + n - 3 degrees of freedom.
    static NullSpaceFamily convolution(int m, int n);

    FamilyVariant variant() const { return variant_; }
    bool is_finite() const { return variant_ == FamilyVariant::Finite; }
    int m() const { return m_; }
    int n() const { return n_; }

    /// Number of distinct (column space, row space) pairs; finite only.
    std::size_t cardinality() const;
    const std::vector<FamilyPart>& parts() const;

    /// Parametric degrees of freedom; convolution variant only.
    int dof() const;
    RankTwoElement generate(const Vector& u, const Vector& v) const;

private:
    NullSpaceFamily(FamilyVariant variant, int m, int n) : variant_(variant), m_(m), n_(n) {}

    FamilyVariant variant_;
    int m_, n_;
    std::vector<FamilyPart> parts_;
    int dof_ = 0;
};

}  // namespace bip
