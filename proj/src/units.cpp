#include "cqom/units.hpp"

#include <cmath>

namespace cqom {

double angular_to_hz_exact(double omega) noexcept {
    double nu = omega / two_pi;
    if (!std::isfinite(nu) || hz_to_angular(nu) == omega) return nu;
    double up = nu, down = nu;
    for (int i = 0; i < 8; ++i) {
        up = std::nextafter(up, HUGE_VAL);
        if (hz_to_angular(up) == omega) return up;
        down = std::nextafter(down, -HUGE_VAL);
        if (hz_to_angular(down) == omega) return down;
    }
    return nu;
}

} // namespace cqom
