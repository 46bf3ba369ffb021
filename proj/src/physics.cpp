#include "gnx/physics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gnx {

void PhysicsParams::validate() const {
    if (!(g > 0.0) || !std::isfinite(g)) throw std::invalid_argument("gravity must be positive");
    if (!(H0 > 0.0) || !std::isfinite(H0)) throw std::invalid_argument("H0 must be positive");
    if (!(alpha >= 1.0 && alpha <= 1.5)) throw std::invalid_argument("alpha must lie in [1, 1.5]");
    if (!(cf >= 0.0) || !std::isfinite(cf)) throw std::invalid_argument("cf must be >= 0");
}

void require_wet(const HydroState& q, const char* where) {
    if (!(q.h > 0.0) || !std::isfinite(q.h) || !std::isfinite(q.hu))
        throw std::domain_error(std::string(where) + ": non-positive or non-finite depth (h = " +
                                std::to_string(q.h) + ")");
}

bool WetMask::all_wet() const noexcept {
    return std::all_of(wet.begin(), wet.end(), [](std::uint8_t w) { return w != 0; });
}

FaceMode classify_face(bool wet_left, bool wet_right, double wet_surface, double dry_mean_bed,
                       double h0) noexcept {
    if (wet_left && wet_right) return FaceMode::Normal;
    if (!wet_left && !wet_right) return FaceMode::Closed;
    if (wet_surface > dry_mean_bed + h0) return FaceMode::Normal;
    return wet_left ? FaceMode::WallForLeft : FaceMode::WallForRight;
}

}  // namespace gnx
