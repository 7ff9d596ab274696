#include "core/null_space.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

namespace bip {

namespace {

/// Sign word for index value: binary representation over {-1, +1}, most
/// significant bit first, 0 -> -1.
Vector sign_word(long value, int bits) {
    Vector g(bits);
    for (int b = 0; b < bits; ++b) {
        const long bit = (value >> (bits - 1 - b)) & 1;
        g(b) = bit ? 1.0 : -1.0;
    }
    return g;
}

/// Orthonormalize the two columns of a full-column-rank m x 2 matrix.
Matrix orthonormal_columns(const Matrix& f) {
    Eigen::HouseholderQR<Matrix> qr(f);
    Matrix q = qr.householderQ() * Matrix::Identity(f.rows(), 2);
    return q;
}

}  // namespace

RankTwoElement conv_rank2_element(const Vector& u, const Vector& v) {
    if (u.size() < 1 || v.size() < 1)
        throw std::invalid_argument("conv_rank2_element: u and v must be nonempty");
    const Eigen::Index m = u.size() + 1;
    const Eigen::Index n = v.size() + 1;
    RankTwoElement elem;
    elem.u_factor = Matrix::Zero(m, 2);
    elem.u_factor.col(0).head(m - 1) = u;
    elem.u_factor.col(1).tail(m - 1) = -u;
    elem.v_factor = Matrix::Zero(n, 2);
    elem.v_factor.col(0).tail(n - 1) = v;
    elem.v_factor.col(1).head(n - 1) = v;
    return elem;
}

SubspacePair subspace_pair(const Matrix& x, double tol) {
    Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& sv = svd.singularValues();
    if (sv.size() < 2 || sv(0) <= 0.0 || sv(1) / sv(0) < tol)
        throw std::domain_error("subspace_pair: matrix has numerical rank < 2");
    if (sv.size() > 2 && sv(2) / sv(0) >= tol)
        throw std::domain_error("subspace_pair: matrix has numerical rank > 2");
    SubspacePair pair;
    pair.col_basis = svd.matrixU().leftCols(2);
    pair.row_basis = svd.matrixV().leftCols(2);
    return pair;
}

NullSpaceFamily NullSpaceFamily::empty(int m, int n) {
    if (m < 1 || n < 1) throw std::invalid_argument("NullSpaceFamily::empty: bad dimensions");
    return NullSpaceFamily(FamilyVariant::Finite, m, n);
}

NullSpaceFamily NullSpaceFamily::biorthogonal(int m, int n) {
    if (m < 4 || n < 4) throw std::invalid_argument("NullSpaceFamily::biorthogonal: requires m, n >= 4");
    const int fm = static_cast<int>(std::floor(std::sqrt(static_cast<double>(m))));
    const int fn = static_cast<int>(std::floor(std::sqrt(static_cast<double>(n))));
    NullSpaceFamily family(FamilyVariant::Finite, m, n);
    family.parts_.reserve(static_cast<std::size_t>(fm) * fn);
    for (int i = 1; i <= fm; ++i) {
        for (int j = 1; j <= fn; ++j) {
            FamilyPart part;
            part.i = i;
            part.j = j;
            part.pair.col_basis = Matrix::Zero(m, 2);
            part.pair.col_basis(i - 1, 0) = 1.0;
            part.pair.col_basis(i, 1) = 1.0;
            part.pair.row_basis = Matrix::Zero(n, 2);
            part.pair.row_basis(j - 1, 0) = 1.0;
            part.pair.row_basis(j, 1) = 1.0;
            family.parts_.push_back(std::move(part));
        }
    }
    return family;
}

NullSpaceFamily NullSpaceFamily::bernoulli(int m, int n, double tau) {
    if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("NullSpaceFamily::bernoulli: tau must be in (0,1)");
    const int bm = static_cast<int>(std::floor(tau * m));
    const int bn = static_cast<int>(std::floor(tau * n));
    if (bm < 1 || bn < 1)
        throw std::invalid_argument("NullSpaceFamily::bernoulli: floor(tau*m) and floor(tau*n) must be >= 1");
    if (m <= bm || n <= bn)
        throw std::invalid_argument("NullSpaceFamily::bernoulli: all-ones blocks would be empty");
    if (bm + bn > 16)
        throw std::length_error("NullSpaceFamily::bernoulli: 2^(floor(tau*m)+floor(tau*n)) parts exceed the construction budget");

    const long count_i = 1L << bm;
    const long count_j = 1L << bn;

    // Column factors for word g: c1 = (g; 1_{m-bm}), c2 = c1 shifted down by
    // bm entries and negated. Row factors are the mirrored construction.
    auto col_pair = [&](const Vector& g) {
        Matrix f = Matrix::Zero(m, 2);
        f.col(0).head(bm) = g;
        f.col(0).tail(m - bm).setOnes();
        f.col(1).segment(bm, bm) = -g;
        if (m > 2 * bm) f.col(1).tail(m - 2 * bm).setConstant(-1.0);
        return f;
    };
    auto row_pair = [&](const Vector& h) {
        Matrix f = Matrix::Zero(n, 2);
        f.col(1).head(bn) = h;
        f.col(1).tail(n - bn).setOnes();
        f.col(0).segment(bn, bn) = h;
        if (n > 2 * bn) f.col(0).tail(n - 2 * bn).setOnes();
        return f;
    };

    std::vector<Matrix> col_bases(static_cast<std::size_t>(count_i));
    for (long i = 0; i < count_i; ++i) col_bases[static_cast<std::size_t>(i)] = orthonormal_columns(col_pair(sign_word(i, bm)));
    std::vector<Matrix> row_bases(static_cast<std::size_t>(count_j));
    for (long j = 0; j < count_j; ++j) row_bases[static_cast<std::size_t>(j)] = orthonormal_columns(row_pair(sign_word(j, bn)));

    NullSpaceFamily family(FamilyVariant::Finite, m, n);
    family.parts_.reserve(static_cast<std::size_t>(count_i * count_j));
    for (long i = 0; i < count_i; ++i) {
        for (long j = 0; j < count_j; ++j) {
            FamilyPart part;
            part.i = static_cast<int>(i);
            part.j = static_cast<int>(j);
            part.pair.col_basis = col_bases[static_cast<std::size_t>(i)];
            part.pair.row_basis = row_bases[static_cast<std::size_t>(j)];
            family.parts_.push_back(std::move(part));
        }
    }
    return family;
}

NullSpaceFamily NullSpaceFamily::convolution(int m, int n) {
    if (m < 2 || n < 2) throw std::invalid_argument("NullSpaceFamily::convolution: requires m, n >= 2");
    NullSpaceFamily family(FamilyVariant::ParametricConvolution, m, n);
    family.dof_ = m + n - 3;
    return family;
}

std::size_t NullSpaceFamily::cardinality() const {
    if (!is_finite()) throw std::logic_error("cardinality: parametric family has no finite cardinality");
    return parts_.size();
}

const std::vector<FamilyPart>& NullSpaceFamily::parts() const {
    if (!is_finite()) throw std::logic_error("parts: parametric family has no part list");
    return parts_;
}

int NullSpaceFamily::dof() const {
    if (is_finite()) throw std::logic_error("dof: finite family is not parametric");
    return dof_;
}

RankTwoElement NullSpaceFamily::generate(const Vector& u, const Vector& v) const {
    if (is_finite()) throw std::logic_error("generate: finite family has no generator");
    if (u.size() != m_ - 1 || v.size() != n_ - 1)
        throw std::invalid_argument("generate: expected u of length m-1 and v of length n-1");
    return conv_rank2_element(u, v);
}

}  // namespace bip
