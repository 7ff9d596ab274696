#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "core/ensembles.hpp"
#include "core/rng.hpp"

#include <cmath>

using bip::EnsembleKind;
using bip::EnsembleSpec;
using bip::MagnitudeLaw;
using bip::Matrix;
using bip::Philox;
using bip::Vector;

TEST_CASE("Philox4x32-10 known-answer vectors") {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    const Counter zero_out = {0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u};
    CHECK(bip::philox4x32_block(Counter{0, 0, 0, 0}, Key{0, 0}) == zero_out);

    const Counter ones_out = {0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu};
    CHECK(bip::philox4x32_block(Counter{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                Key{0xffffffffu, 0xffffffffu}) == ones_out);

    const Counter pi_out = {0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u};
    CHECK(bip::philox4x32_block(Counter{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                Key{0xa4093822u, 0x299f31d0u}) == pi_out);
}

TEST_CASE("generator streams are deterministic and distinct") {
    Philox a(42, 7), b(42, 7), c(42, 8);
    bool any_differs = false;
    for (int i = 0; i < 64; ++i) {
        const std::uint64_t va = a.next_u64();
        CHECK(va == b.next_u64());
        any_differs = any_differs || (va != c.next_u64());
    }
    CHECK(any_differs);

    Philox u(5, 0);
    for (int i = 0; i < 1000; ++i) {
        const double value = u.uniform();
        CHECK(value >= 0.0);
        CHECK(value < 1.0);
    }
}

TEST_CASE("Bernoulli draws have unit entries and exact norm") {
    Philox rng(1, 0);
    const EnsembleSpec spec = EnsembleSpec::bernoulli(5);
    for (int trial = 0; trial < 100; ++trial) {
        const Vector x = bip::sample(spec, rng);
        for (int i = 0; i < 5; ++i) CHECK(std::abs(x(i)) == 1.0);
        CHECK(x.norm() == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
    }
}

TEST_CASE("bi-orthogonal draws are signed scaled basis vectors") {
    Philox rng(2, 0);
    const EnsembleSpec spec = EnsembleSpec::biorthogonal(9);
    for (int trial = 0; trial < 200; ++trial) {
        const Vector x = bip::sample(spec, rng);
        int support = 0;
        for (int i = 0; i < 9; ++i)
            if (x(i) != 0.0) ++support;
        CHECK(support == 1);
        CHECK(x.cwiseAbs().maxCoeff() == doctest::Approx(3.0).epsilon(1e-15));
    }

    // Rotated basis: draws are signed scaled columns of the basis.
    Matrix basis(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    basis << s, s, s, -s;
    const EnsembleSpec rotated = EnsembleSpec::biorthogonal(2, MagnitudeLaw::ConstantSqrtDim, basis);
    for (int trial = 0; trial < 50; ++trial) {
        const Vector x = bip::sample(rotated, rng);
        const double a0 = std::abs(basis.col(0).dot(x));
        const double a1 = std::abs(basis.col(1).dot(x));
        CHECK(std::min(a0, a1) <= 1e-12);
        CHECK(std::max(a0, a1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    }

    Matrix bad(2, 2);
    bad << 1, 1, 0, 1;
    CHECK_THROWS_AS(EnsembleSpec::biorthogonal(2, MagnitudeLaw::ConstantSqrtDim, bad),
                    std::invalid_argument);
}

TEST_CASE("two-point magnitude law hits both levels with E norm^2 = dim") {
    Philox rng(3, 0);
    const int dim = 12;
    const EnsembleSpec spec = EnsembleSpec::biorthogonal(dim, MagnitudeLaw::TwoPointThirds);
    const double low = std::sqrt(dim / 3.0);
    const double high = std::sqrt(5.0 * dim / 3.0);
    long low_count = 0, high_count = 0;
    double sum_sq = 0.0;
    const long trials = 20000;
    for (long trial = 0; trial < trials; ++trial) {
        const double norm = bip::sample(spec, rng).norm();
        sum_sq += norm * norm;
        if (std::abs(norm - low) < 1e-9)
            ++low_count;
        else if (std::abs(norm - high) < 1e-9)
            ++high_count;
    }
    CHECK(low_count + high_count == trials);
    CHECK(low_count > trials / 3);
    CHECK(high_count > trials / 3);
    CHECK(sum_sq / static_cast<double>(trials) == doctest::Approx(dim).epsilon(0.05));
}

TEST_CASE("single large Gaussian draw concentrates") {
    Philox rng(4, 0);
    const EnsembleSpec spec = EnsembleSpec::gaussian(10000);
    const Vector x = bip::sample(spec, rng);
    const double ratio = x.squaredNorm() / 10000.0;
    CHECK(ratio > 0.9);
    CHECK(ratio < 1.1);
}

TEST_CASE("assumption validation") {
    SUBCASE("Bernoulli covariance") {
        Philox rng(5, 0);
        const auto report = bip::validate_assumptions(EnsembleSpec::bernoulli(8), 100000, rng);
        CHECK(report.covariance_deviation <= bip::default_covariance_threshold(8, report.trials));
        CHECK(report.empirical_mean_norm <= bip::default_mean_norm_threshold(8, report.trials));
        CHECK(report.min_norm_observed == doctest::Approx(std::sqrt(8.0)).epsilon(1e-12));
    }

    SUBCASE("bi-orthogonal covariance is the identity in expectation") {
        Philox rng(6, 0);
        const auto report = bip::validate_assumptions(EnsembleSpec::biorthogonal(9), 100000, rng);
        CHECK(report.covariance_deviation <= bip::default_covariance_threshold(9, report.trials));
        CHECK(report.min_norm_observed == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(std::abs(report.norm_direction_corr) <= 0.05);
    }

    SUBCASE("Gaussian has no almost-sure norm floor to report") {
        Philox rng(7, 0);
        const auto report = bip::validate_assumptions(EnsembleSpec::gaussian(4), 100000, rng);
        CHECK(report.min_norm_observed > 0.0);
        CHECK(report.min_norm_observed < 1.0);  // small norms do occur
        CHECK(std::abs(report.norm_direction_corr) <= 0.05);
    }

    SUBCASE("trial floor") {
        Philox rng(8, 0);
        CHECK_THROWS_AS(bip::validate_assumptions(EnsembleSpec::gaussian(4), 10, rng),
                        std::invalid_argument);
    }
}
