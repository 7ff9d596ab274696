#include "core/identifiability.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bip {

namespace {

constexpr std::size_t kExhaustiveBudget = 10'000'000;

void require_dims(const RankOneInstance& inst, const NullSpaceFamily& family) {
    if (inst.u.size() != family.m() || inst.v.size() != family.n())
        throw std::invalid_argument("identifiability: instance dimensions do not match the family");
}

void require_delta(double delta_test) {
    if (!(delta_test >= 0.0 && delta_test < 1.0))
        throw std::invalid_argument("identifiability: delta_test must lie in [0, 1)");
}

/// Scan helper caching squared projections per distinct column index i and
/// row index j; parts with equal i (resp. j) share their basis by family
/// construction. Visits parts in stored (lexicographic) order.
template <typename OnPart>
void scan_parts(const RankOneInstance& inst, const NullSpaceFamily& family, OnPart&& on_part) {
    constexpr double kUnset = -1.0;
    std::vector<double> col_cache;
    std::vector<double> row_cache;
    for (const FamilyPart& part : family.parts()) {
        if (part.i >= static_cast<int>(col_cache.size())) col_cache.resize(part.i + 1, kUnset);
        if (part.j >= static_cast<int>(row_cache.size())) row_cache.resize(part.j + 1, kUnset);
        double& mc = col_cache[part.i];
        if (mc == kUnset) mc = part.pair.col_projection_sq(inst.u);
        double& mr = row_cache[part.j];
        if (mr == kUnset) mr = part.pair.row_projection_sq(inst.v);
        if (!on_part(part, mc, mr)) return;
    }
}

}  // namespace

bool check_universal(const NullSpaceFamily& family) {
    if (!family.is_finite())
        throw std::invalid_argument("check_universal: parametric family is nontrivial by construction");
    return family.cardinality() == 0;
}

IdentifiabilityVerdict check_sufficient_instance(const RankOneInstance& inst,
                                                 const NullSpaceFamily& family,
                                                 double delta_test) {
    if (!family.is_finite())
        throw std::invalid_argument("check_sufficient_instance: family must be finite");
    require_dims(inst, family);
    require_delta(delta_test);

    IdentifiabilityVerdict verdict;
    verdict.outcome = Outcome::Identifiable;
    verdict.margins.reserve(family.cardinality());
    const double threshold = 1.0 - delta_test;
    scan_parts(inst, family, [&](const FamilyPart& part, double mc, double mr) {
        verdict.margins.emplace_back(mc, mr);
        if (!verdict.witness && mc >= threshold && mr >= threshold) {
            verdict.outcome = Outcome::SufficientConditionFailed;
            verdict.witness = AmbiguityWitness{part.i, part.j, mc, mr};
        }
        return true;
    });
    return verdict;
}

std::optional<AmbiguityWitness> detect_ambiguity_exhaustive(const RankOneInstance& inst,
                                                            const NullSpaceFamily& family,
                                                            double delta_test) {
    if (!family.is_finite())
        throw std::invalid_argument("detect_ambiguity_exhaustive: family must be finite");
    require_dims(inst, family);
    require_delta(delta_test);
    if (family.cardinality() > kExhaustiveBudget)
        throw std::length_error("detect_ambiguity_exhaustive: family exceeds the 10^7-part scan budget");

    std::optional<AmbiguityWitness> witness;
    const double threshold = 1.0 - delta_test;
    scan_parts(inst, family, [&](const FamilyPart& part, double mc, double mr) {
        if (mc >= threshold && mr >= threshold) {
            witness = AmbiguityWitness{part.i, part.j, mc, mr};
            return false;
        }
        return true;
    });
    return witness;
}

std::pair<Corollary2Analysis, bool> check_corollary2(const RankOneInstance& inst,
                                                     const Matrix& x,
                                                     double tol) {
    if (inst.u.size() != x.rows() || inst.v.size() != x.cols())
        throw std::invalid_argument("check_corollary2: dimension mismatch");
    if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("check_corollary2: tol must be in (0, 1)");

    Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& sv = svd.singularValues();
    if (sv.size() < 2 || sv(0) <= 0.0 || sv(1) <= 0.0)
        throw std::domain_error("check_corollary2: X must have rank two");
    if (sv.size() > 2 && sv(2) / sv(0) >= tol)
        throw std::domain_error("check_corollary2: X must have rank two");

    Corollary2Analysis analysis;
    analysis.sigma1 = sv(0);
    analysis.sigma2 = sv(1);
    if (std::abs(sv(0) - sv(1)) > tol * sv(0))
        throw std::domain_error("check_corollary2: unsupported, singular values of X are not equal");

    const Vector cu = svd.matrixU().leftCols(2).transpose() * inst.u;
    const Vector rv = svd.matrixV().leftCols(2).transpose() * inst.v;
    if (cu.squaredNorm() < 1.0 - tol || rv.squaredNorm() < 1.0 - tol)
        throw std::domain_error("check_corollary2: not applicable, u or v lies outside the subspaces of X");

    analysis.alpha = {cu(0), cu(1), rv(0), rv(1)};
    analysis.inner = inst.u.dot(x * inst.v) / analysis.sigma1;
    return {analysis, analysis.inner <= 0.0};
}

}  // namespace bip
