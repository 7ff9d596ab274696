#include "core/lifting.hpp"

#include <stdexcept>
#include <utility>

namespace bip {

LiftedOperator::LiftedOperator(int m, int n, int q, OperatorKind kind, std::vector<Matrix> basis)
    : m_(m), n_(n), q_(q), kind_(kind), basis_(std::move(basis)) {}

LiftedOperator LiftedOperator::linear_convolution(int m, int n) {
    if (m < 1 || n < 1) throw std::invalid_argument("linear_convolution: m and n must be >= 1");
    return LiftedOperator(m, n, m + n - 1, OperatorKind::LinearConvolution, {});
}

LiftedOperator LiftedOperator::from_matrices(const std::vector<Matrix>& basis) {
    if (basis.empty()) throw std::invalid_argument("from_matrices: basis list is empty");
    const int m = static_cast<int>(basis.front().rows());
    const int n = static_cast<int>(basis.front().cols());
    if (m < 1 || n < 1) throw std::invalid_argument("from_matrices: basis matrices must be nonempty");
    for (const Matrix& s : basis) {
        if (s.rows() != m || s.cols() != n)
            throw std::invalid_argument("from_matrices: basis matrices have mismatched shapes");
    }
    return LiftedOperator(m, n, static_cast<int>(basis.size()), OperatorKind::Generic, basis);
}

Matrix LiftedOperator::basis_matrix(int k) const {
    if (k < 0 || k >= q_) throw std::out_of_range("basis_matrix: index out of range");
    if (kind_ == OperatorKind::LinearConvolution) {
        Matrix s = Matrix::Zero(m_, n_);
        // (S_k)_{ij} = 1 iff i + j = k + 1 with 1-based indices.
        for (int i = 0; i < m_; ++i) {
            const int j = k - i;
            if (j >= 0 && j < n_) s(i, j) = 1.0;
        }
        return s;
    }
    return basis_[static_cast<std::size_t>(k)];
}

Vector LiftedOperator::apply(const Matrix& w) const {
    if (w.rows() != m_ || w.cols() != n_) throw std::invalid_argument("apply: matrix shape mismatch");
    Vector z = Vector::Zero(q_);
    if (kind_ == OperatorKind::LinearConvolution) {
        for (int i = 0; i < m_; ++i)
            for (int j = 0; j < n_; ++j) z(i + j) += w(i, j);
        return z;
    }
    for (int k = 0; k < q_; ++k) z(k) = basis_[static_cast<std::size_t>(k)].cwiseProduct(w).sum();
    return z;
}

Vector LiftedOperator::apply_bilinear(const Vector& x, const Vector& y) const {
    if (x.size() != m_ || y.size() != n_) throw std::invalid_argument("apply_bilinear: signal dimension mismatch");
    if (kind_ == OperatorKind::LinearConvolution) return convolve(x, y);
    Vector z(q_);
    for (int k = 0; k < q_; ++k) z(k) = x.dot(basis_[static_cast<std::size_t>(k)] * y);
    return z;
}

Matrix LiftedOperator::adjoint(const Vector& z) const {
    if (z.size() != q_) throw std::invalid_argument("adjoint: observation length mismatch");
    Matrix w = Matrix::Zero(m_, n_);
    if (kind_ == OperatorKind::LinearConvolution) {
        for (int i = 0; i < m_; ++i)
            for (int j = 0; j < n_; ++j) w(i, j) = z(i + j);
        return w;
    }
    for (int k = 0; k < q_; ++k) w += z(k) * basis_[static_cast<std::size_t>(k)];
    return w;
}

LiftedOperator LiftedOperator::transform_with_dictionaries(const Matrix& a, const Matrix& b) const {
    if (a.rows() != m_) throw std::invalid_argument("transform_with_dictionaries: A must have m rows");
    if (b.rows() != n_) throw std::invalid_argument("transform_with_dictionaries: B must have n rows");
    std::vector<Matrix> basis;
    basis.reserve(static_cast<std::size_t>(q_));
    for (int k = 0; k < q_; ++k) basis.push_back(a.transpose() * basis_matrix(k) * b);
    return LiftedOperator(static_cast<int>(a.cols()), static_cast<int>(b.cols()), q_,
                          OperatorKind::DictionaryTransformed, std::move(basis));
}

Matrix LiftedOperator::flattened() const {
    Matrix flat(q_, static_cast<Eigen::Index>(m_) * n_);
    if (kind_ == OperatorKind::LinearConvolution) {
        flat.setZero();
        for (int i = 0; i < m_; ++i)
            for (int j = 0; j < n_; ++j) flat(i + j, static_cast<Eigen::Index>(j) * m_ + i) = 1.0;
        return flat;
    }
    for (int k = 0; k < q_; ++k) {
        const Matrix& s = basis_[static_cast<std::size_t>(k)];
        flat.row(k) = Eigen::Map<const Vector>(s.data(), s.size()).transpose();
    }
    return flat;
}

Vector convolve(const Vector& x, const Vector& y) {
    const Eigen::Index m = x.size();
    const Eigen::Index n = y.size();
    if (m < 1 || n < 1) throw std::invalid_argument("convolve: empty input");
    Vector z = Vector::Zero(m + n - 1);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < n; ++j) z(i + j) += x(i) * y(j);
    return z;
}

}  // namespace bip
