#pragma once

#include "core/null_space.hpp"
#include "core/rank_one.hpp"

#include <array>
#include <optional>
#include <utility>
#include <vector>

namespace bip {

enum class Outcome {
    Identifiable,
    SufficientConditionFailed,
    Unknown,
};

/// Part of a finite family on which the sufficient-condition check failed,
/// together with the squared projection norms that triggered it.
struct AmbiguityWitness {
    int i = 0;
    int j = 0;
    double col_margin = 0.0;  // ||P_C u||^2
    double row_margin = 0.0;  // ||P_R v||^2
};

struct IdentifiabilityVerdict {
    Outcome outcome = Outcome::Unknown;
    std::optional<AmbiguityWitness> witness;
    /// Per-part (||P_C u||^2, ||P_R v||^2), in the family's lexicographic
    /// part order.
    std::vector<std::pair<double, double>> margins;
};

/// Universal identifiability: every observation is recoverable iff the
/// restricted rank-two null space is trivial, i.e. the finite family has no
/// parts. Parametric families are nontrivial by construction and rejected.
bool check_universal(const NullSpaceFamily& family);

/// Instance sufficient condition: M = sigma u v^T fails the condition iff
/// some part has both ||P_C u||^2 >= 1 - delta_test and
/// ||P_R v||^2 >= 1 - delta_test (the soft membership event). Otherwise the
/// instance is identifiable up to a delta_test-neighborhood.
IdentifiabilityVerdict check_sufficient_instance(const RankOneInstance& inst,
                                                 const NullSpaceFamily& family,
                                                 double delta_test);

/// Exhaustive scan returning the lexicographically first failing part, or
/// nothing. Families larger than 10^7 parts are rejected.
std::optional<AmbiguityWitness> detect_ambiguity_exhaustive(const RankOneInstance& inst,
                                                            const NullSpaceFamily& family,
                                                            double delta_test);

struct Corollary2Analysis {
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    /// Representation coefficients of u in {u1, u2} and v in {v1, v2} for the
    /// SVD basis of X (basis-dependent; the inner product below is not).
    std::array<double, 4> alpha{};
    /// alpha1*alpha3 + alpha2*alpha4 = u^T X v / sigma1, invariant under the
    /// rotation freedom of an equal-singular-value SVD.
    double inner = 0.0;
};

/// Equal-singular-value sharp test: for X in the restricted rank-two null
/// space with sigma1(X) = sigma2(X) (within tol relative) and u in C(X),
/// v in R(X) (within tol), M is identifiable against the positive ray of X
/// iff inner <= 0. Throws if the singular values differ beyond tol (the
/// weighted-inner-product extension is not provided) or if u or v lies
/// outside the subspaces (the plain sufficient condition already decides).
std::pair<Corollary2Analysis, bool> check_corollary2(const RankOneInstance& inst,
                                                     const Matrix& x,
                                                     double tol = 1e-8);

}  // namespace bip
