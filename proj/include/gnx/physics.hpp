#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace gnx {

/// Conserved pair (h, hu) at a point.
struct HydroState {
    double h = 0.0;
    double hu = 0.0;

    double u() const noexcept { return hu / h; }
};

struct PhysicsParams {
    double g = 9.81;
    double H0 = 1.0;     ///< reference depth
    double alpha = 1.0;  ///< dispersion parameter
    double cf = 0.0;     ///< Chezy friction coefficient
    bool friction_on = false;

    bool operator==(const PhysicsParams&) const = default;
    void validate() const;
    /// Friction coefficient actually applied (0 when friction is off).
    double friction() const noexcept { return friction_on ? cf : 0.0; }
};

using Flux2 = std::array<double, 2>;

/// Throws std::domain_error unless h > 0 and both entries are finite.
void require_wet(const HydroState& q, const char* where);

/// Per-element wet flags plus the minimum depth used at fronts.
struct WetMask {
    std::vector<std::uint8_t> wet;
    double h0 = 0.0;

    static WetMask all_wet(std::size_t n_elements, double h0 = 0.0) {
        return WetMask{std::vector<std::uint8_t>(n_elements, 1), h0};
    }
    bool is_wet(std::size_t e) const noexcept { return wet.empty() || wet[e] != 0; }
    bool all_wet() const noexcept;
};

/// Treatment of an interior node given the wet state of its two elements.
enum class FaceMode {
    Normal,        ///< both wet, or a front that water may cross from the wet side
    Closed,        ///< both dry: no exchange
    WallForLeft,   ///< left wet, right dry: left sees a wall, right receives nothing
    WallForRight,  ///< right wet, left dry
};

/// A wet/dry front is open when the wet-side free surface at the node stands above
/// the dry element's mean bed by more than h0; otherwise the wet side sees a wall.
FaceMode classify_face(bool wet_left, bool wet_right, double wet_surface, double dry_mean_bed,
                       double h0) noexcept;

}  // namespace gnx
