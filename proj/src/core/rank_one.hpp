#pragma once

#include "core/lifting.hpp"

namespace bip {

/// Rank-one instance M = x y^T together with its normalized factorization
/// M = sigma u v^T, ||u|| = ||v|| = 1, sigma > 0. Sign is canonicalized so the
/// first nonzero entry of u is positive; sigma absorbs all magnitude. Two
/// pairs (x, y) and (alpha x, y / alpha) produce identical instances, which
/// makes equality of the scaling equivalence class a plain comparison.
struct RankOneInstance {
    Vector x;
    Vector y;
    double sigma;
    Vector u;
    Vector v;

    static RankOneInstance from_pair(const Vector& x, const Vector& y);

    Matrix lifted() const { return x * y.transpose(); }
};

}  // namespace bip
