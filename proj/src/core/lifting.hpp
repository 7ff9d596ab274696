#pragma once

#include <Eigen/Dense>

#include <vector>

namespace bip {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class OperatorKind {
    Generic,
    LinearConvolution,
    DictionaryTransformed,
};

/// Linear operator S : R^{m x n} -> R^q represented by an ordered list of
/// basis matrices S_1..S_q, with (S(W))_j = <W, S_j> under the trace inner
/// product. For the linear convolution kind the basis is the anti-diagonal
/// indicator family (S_k)_{ij} = 1 iff i + j = k + 1 (1-based), q = m+n-1,
/// and apply/adjoint use direct anti-diagonal sums; the basis-matrix form is
/// the ground truth the fast path must agree with.
class LiftedOperator {
public:
    static LiftedOperator linear_convolution(int m, int n);
    static LiftedOperator from_matrices(const std::vector<Matrix>& basis);

    int m() const { return m_; }
    int n() const { return n_; }
    int q() const { return q_; }
    OperatorKind kind() const { return kind_; }

    /// k-th basis matrix, 0-based. Generated on demand for the convolution
    /// kind, stored explicitly otherwise.
    Matrix basis_matrix(int k) const;

    Vector apply(const Matrix& w) const;
    Vector apply_bilinear(const Vector& x, const Vector& y) const;

    /// Adjoint under the trace inner product: sum_j z_j S_j.
    Matrix adjoint(const Vector& z) const;

    /// Absorb dictionaries x = A beta, y = B gamma into the basis, giving the
    /// operator with basis A^T S_j B acting on p x r matrices.
    LiftedOperator transform_with_dictionaries(const Matrix& a, const Matrix& b) const;

    /// Rows are vec(S_j) (column-major), shape q x (m*n).
    Matrix flattened() const;

private:
    LiftedOperator(int m, int n, int q, OperatorKind kind, std::vector<Matrix> basis);

    int m_, n_, q_;
    OperatorKind kind_;
    std::vector<Matrix> basis_;  // empty for the convolution kind
};

/// Direct convolution z_k = sum_{i+j=k} x_i y_j (0-based), length m+n-1.
Vector convolve(const Vector& x, const Vector& y);

}  // namespace bip
