#pragma once

#include <functional>
#include <variant>

#include "gnx/dgcore.hpp"
#include "gnx/physics.hpp"

namespace gnx {

/// |Q_b| = A |u|^m with constant A.
struct Grass {
    double A = 0.0;
    double m = 3.0;
};

/// |Q_b| = A(h, u) |u|^m with a user closure for A.
struct GeneralPower {
    std::function<double(double h, double u)> A;
    double m = 3.0;
};

using SedimentLaw = std::variant<Grass, GeneralPower>;

/// Throws std::invalid_argument unless 1 <= m <= 3 and A >= 0 (A checked for Grass only).
void validate(const SedimentLaw& law);
/// True when the law can never move sediment (Grass with A == 0).
bool is_rigid(const SedimentLaw& law) noexcept;

/// Bed-load flux in the flow direction, sign(u) |Q_b|.
double sediment_flux(const HydroState& q, const SedimentLaw& law);

/// (u+ sqrt(h+) + u- sqrt(h-)) / (sqrt(h+) + sqrt(h-)).
double roe_velocity(const HydroState& q_plus, const HydroState& q_minus);

/// Upwind flux through a face with outward normal n of the "+" element:
/// Q_b(+) when u_roe n >= 0, else Q_b(-). Bed values do not enter the bed-load closures.
double upwind_bed_flux(const HydroState& q_plus, const HydroState& q_minus, double b_plus,
                       double b_minus, const SedimentLaw& law, double n);

/// Elements that carry bed load: wet with mean depth (component 0 of q) >= min_depth.
WetMask sediment_mask(const DgField& q, const WetMask& mask, double min_depth);

/// Flux through an interior node, single valued: upwinded from the left element's side,
/// zero when either neighbour is dry.
double node_bed_flux(const DgSpace& space, const DgField& q, const WetMask& mask,
                     const SedimentLaw& law, std::size_t node);

/// db/dt from (db/dt, v) - (Q_b, v') + <Q_b*, v n> = 0 with no flux through the domain
/// ends and wet/dry fronts. Dry elements neither transport nor change.
DgField exner_rhs(const DgSpace& space, const DgField& q, const DgField& b, const SedimentLaw& law,
                  const WetMask& mask);

}  // namespace gnx
