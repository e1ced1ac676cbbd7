#pragma once

#include "pidtune/lti.hpp"

namespace pidtune {

/// Ultimate proportional gain and the period of the sustained oscillation
/// the loop exhibits at that gain.
struct UltimateParams {
  double ku = 0.0;
  double tu = 0.0;  // seconds
};

enum class ControlType { P, PI, PID };

/// Ultimate gain/period of a strictly proper, open-loop stable plant under
/// unity negative feedback. The gain is located by bisection on the
/// Routh-Hurwitz verdict; the oscillation frequency comes from the auxiliary
/// Routh polynomial at marginality and is cross-checked against the -180
/// degree phase crossing of a frequency sweep. Throws DomainError when no
/// ultimate gain exists (phase never reaches -180 degrees) or the plant is
/// not open-loop stable.
UltimateParams find_ultimate(const TransferFunction& plant);

/// Classic lookup: P -> (0.50 ku, 0, 0); PI -> (0.45 ku, 0.54 ku/tu, 0);
/// PID -> (0.60 ku, 1.2 ku/tu, 3 ku tu / 40).
PidGains zn_gains(const UltimateParams& ultimate, ControlType control_type);

}  // namespace pidtune
