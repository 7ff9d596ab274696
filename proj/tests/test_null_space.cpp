#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "core/lifting.hpp"
#include "core/null_space.hpp"
#include "core/rng.hpp"
#include "support/oracles.hpp"

using bip::LiftedOperator;
using bip::Matrix;
using bip::NullSpaceFamily;
using bip::Philox;
using bip::RankTwoElement;
using bip::SubspacePair;
using bip::Vector;

namespace {

Vector random_vector(Philox& rng, int dim) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = rng.normal();
    return v;
}

Matrix projector(const Matrix& basis) { return basis * basis.transpose(); }

}  // namespace

TEST_CASE("convolution rank-two element, 2x2 closed form") {
    Vector one(1);
    one << 1.0;
    const Matrix x = bip::conv_rank2_element(one, one).to_matrix();
    Matrix expected(2, 2);
    expected << 0, 1, -1, 0;
    CHECK(x == expected);
}

TEST_CASE("zero parameter vector gives the zero matrix") {
    Vector u = Vector::Zero(3);
    Vector v(5);
    v << 1, -2, 0.5, 3, 1;
    CHECK(bip::conv_rank2_element(u, v).to_matrix().cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(bip::conv_rank2_element(Vector(), v), std::invalid_argument);
}

TEST_CASE("random elements annihilate under the convolution map") {
    const LiftedOperator op = LiftedOperator::linear_convolution(7, 11);
    Philox rng(101, 0);
    for (int trial = 0; trial < 500; ++trial) {
        const Vector u = random_vector(rng, 6);
        const Vector v = random_vector(rng, 10);
        const Matrix x = bip::conv_rank2_element(u, v).to_matrix();
        const double scale = x.norm();
        // Checked through the operator and through anti-diagonal sums.
        CHECK(op.apply(x).cwiseAbs().maxCoeff() <= 1e-12 * scale);
        CHECK(oracle::antidiagonal_sums(x).cwiseAbs().maxCoeff() <= 1e-12 * scale);
    }
}

TEST_CASE("subspace pair extraction") {
    SUBCASE("already-orthonormal spectral matrix") {
        Matrix x = Matrix::Zero(4, 4);
        x(0, 0) = 1.0;
        x(1, 1) = 1.0;
        const SubspacePair pair = bip::subspace_pair(x, 1e-8);
        Matrix p = projector(pair.col_basis);
        Matrix expected = Matrix::Zero(4, 4);
        expected(0, 0) = 1.0;
        expected(1, 1) = 1.0;
        CHECK((p - expected).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK((projector(pair.row_basis) - expected).cwiseAbs().maxCoeff() <= 1e-12);
    }

    SUBCASE("convolution element column space matches the factor span") {
        Philox rng(103, 0);
        for (int trial = 0; trial < 50; ++trial) {
            Vector u = random_vector(rng, 4).normalized();
            Vector v = random_vector(rng, 4).normalized();
            const RankTwoElement elem = bip::conv_rank2_element(u, v);
            const SubspacePair pair = bip::subspace_pair(elem.to_matrix(), 1e-8);
            // Independent orthonormalization of the raw factor columns.
            const Matrix gs = oracle::gram_schmidt(elem.u_factor);
            CHECK((projector(pair.col_basis) - projector(gs)).cwiseAbs().maxCoeff() <= 1e-8);
        }
    }

    SUBCASE("rank-one and rank-three inputs are rejected") {
        Philox rng(104, 0);
        const Vector a = random_vector(rng, 5);
        const Vector b = random_vector(rng, 5);
        CHECK_THROWS_AS(bip::subspace_pair(a * b.transpose(), 1e-8), std::domain_error);

        Matrix full = Matrix::Identity(5, 5);
        CHECK_THROWS_AS(bip::subspace_pair(full, 1e-8), std::domain_error);
    }
}

TEST_CASE("bi-orthogonal family structure") {
    CHECK(NullSpaceFamily::biorthogonal(9, 9).cardinality() == 9);
    CHECK(NullSpaceFamily::biorthogonal(100, 100).cardinality() == 100);

    const NullSpaceFamily family = NullSpaceFamily::biorthogonal(4, 4);
    CHECK(family.cardinality() == 4);
    const auto& part = family.parts().front();
    CHECK(part.i == 1);
    CHECK(part.j == 1);
    Matrix expected = Matrix::Zero(4, 2);
    expected(0, 0) = 1.0;
    expected(1, 1) = 1.0;
    CHECK(part.pair.col_basis == expected);

    CHECK_THROWS_AS(NullSpaceFamily::biorthogonal(3, 9), std::invalid_argument);
}

TEST_CASE("bi-orthogonal cardinality recount over the dimension grid") {
    auto recount = [](int m, int n) {
        return static_cast<std::size_t>(oracle::isqrt(m) * oracle::isqrt(n));
    };
    for (int m = 4; m <= 60; ++m)
        for (int n = 4; n <= 60; ++n)
            CHECK(NullSpaceFamily::biorthogonal(m, n).cardinality() == recount(m, n));
    for (int d = 61; d <= 400; ++d)
        CHECK(NullSpaceFamily::biorthogonal(d, d).cardinality() == recount(d, d));
    Philox rng(105, 0);
    for (int trial = 0; trial < 200; ++trial) {
        const int m = 4 + static_cast<int>(rng.uniform_below(397));
        const int n = 4 + static_cast<int>(rng.uniform_below(397));
        CHECK(NullSpaceFamily::biorthogonal(m, n).cardinality() == recount(m, n));
    }
}

TEST_CASE("Bernoulli family structure") {
    const NullSpaceFamily family = NullSpaceFamily::bernoulli(10, 10, 0.2);
    CHECK(family.cardinality() == 16);  // 2^2 * 2^2

    for (const auto& part : family.parts()) {
        CHECK((part.pair.col_basis.transpose() * part.pair.col_basis - Matrix::Identity(2, 2))
                  .cwiseAbs()
                  .maxCoeff() <= 1e-10);
        CHECK((part.pair.row_basis.transpose() * part.pair.row_basis - Matrix::Identity(2, 2))
                  .cwiseAbs()
                  .maxCoeff() <= 1e-10);
    }

    // Word 0 maps to all -1 bits: the leading column is (-1,-1,1,...,1).
    Vector lead0(10);
    lead0 << -1, -1, 1, 1, 1, 1, 1, 1, 1, 1;
    const auto& part0 = family.parts().front();
    CHECK(part0.i == 0);
    CHECK((projector(part0.pair.col_basis) * lead0 - lead0).cwiseAbs().maxCoeff() <= 1e-10);

    // Word 3 = binary 11 maps to (+1,+1): leading column is all ones.
    const Vector ones = Vector::Ones(10);
    const auto& part3 = family.parts()[3 * 4];
    CHECK(part3.i == 3);
    CHECK((projector(part3.pair.col_basis) * ones - ones).cwiseAbs().maxCoeff() <= 1e-10);

    CHECK_THROWS_AS(NullSpaceFamily::bernoulli(10, 10, 0.05), std::invalid_argument);
    CHECK_THROWS_AS(NullSpaceFamily::bernoulli(90, 90, 0.2), std::length_error);
}

TEST_CASE("Bernoulli parts are pairwise distinct") {
    // floor(tau m) = floor(tau n) = 4 bits: exhaustive over all 16 x 16 parts.
    const NullSpaceFamily family = NullSpaceFamily::bernoulli(10, 10, 0.4);
    CHECK(family.cardinality() == 256);
    std::vector<Matrix> col_projectors, row_projectors;
    for (int i = 0; i < 16; ++i) {
        const auto& part = family.parts()[static_cast<std::size_t>(i) * 16];
        col_projectors.push_back(projector(part.pair.col_basis));
    }
    for (int j = 0; j < 16; ++j) row_projectors.push_back(projector(family.parts()[j].pair.row_basis));
    for (int a = 0; a < 16; ++a) {
        for (int b = a + 1; b < 16; ++b) {
            CHECK((col_projectors[a] - col_projectors[b]).norm() > 1e-8);
            CHECK((row_projectors[a] - row_projectors[b]).norm() > 1e-8);
        }
    }
}

TEST_CASE("parametric convolution family") {
    CHECK(NullSpaceFamily::convolution(3, 4).dof() == 4);
    CHECK(NullSpaceFamily::convolution(2, 2).dof() == 1);
    CHECK_FALSE(NullSpaceFamily::convolution(3, 4).is_finite());
    CHECK_THROWS_AS(NullSpaceFamily::convolution(3, 4).parts(), std::logic_error);
    CHECK_THROWS_AS(NullSpaceFamily::biorthogonal(9, 9).dof(), std::logic_error);

    const NullSpaceFamily family = NullSpaceFamily::convolution(8, 8);
    Philox rng(107, 0);
    for (int trial = 0; trial < 1000; ++trial) {
        const Vector u = random_vector(rng, 7);
        const Vector v = random_vector(rng, 7);
        const Matrix x = family.generate(u, v).to_matrix();
        CHECK(oracle::antidiagonal_sums(x).cwiseAbs().maxCoeff() <= 1e-12 * std::max(x.norm(), 1e-300));
    }
}

TEST_CASE("projector idempotence across family kinds") {
    Philox rng(109, 0);
    const NullSpaceFamily biorth = NullSpaceFamily::biorthogonal(12, 17);
    const NullSpaceFamily bern = NullSpaceFamily::bernoulli(12, 17, 0.2);
    for (const NullSpaceFamily* family : {&biorth, &bern}) {
        for (const auto& part : family->parts()) {
            const Matrix p = projector(part.pair.col_basis);
            CHECK((p * p - p).cwiseAbs().maxCoeff() <= 1e-10);
            const Matrix r = projector(part.pair.row_basis);
            CHECK((r * r - r).cwiseAbs().maxCoeff() <= 1e-10);
        }
    }
}
