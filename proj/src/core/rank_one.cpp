#include "core/rank_one.hpp"

#include <stdexcept>

namespace bip {

RankOneInstance RankOneInstance::from_pair(const Vector& x, const Vector& y) {
    const double nx = x.norm();
    const double ny = y.norm();
    if (nx == 0.0 || ny == 0.0)
        throw std::invalid_argument("RankOneInstance: x and y must be nonzero");
    RankOneInstance inst;
    inst.x = x;
    inst.y = y;
    inst.sigma = nx * ny;
    inst.u = x / nx;
    inst.v = y / ny;
    for (Eigen::Index i = 0; i < inst.u.size(); ++i) {
        if (inst.u(i) != 0.0) {
            if (inst.u(i) < 0.0) {
                inst.u = -inst.u;
                inst.v = -inst.v;
            }
            break;
        }
    }
    return inst;
}

}  // namespace bip
