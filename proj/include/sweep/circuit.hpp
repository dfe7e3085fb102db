#pragma once

// The ideal-diode RLC circuit used as the built-in demonstration.

#include "sweep/lcs.hpp"

namespace sweep {

struct CircuitParameters {
  double R1 = 1.0;
  double R2 = 2.0;
  double R3 = 1.0;
  double L2 = 1.0;
  double L3 = 2.0;
  double C4 = 1.0;
};

enum class CircuitVariant {
  /// u(t) = 16 sin(6 pi t) - 0.5, G = 0
  Smooth,
  /// u(t) = sign(sin(4 pi t)), G = (0, 1)^T; the constraint set jumps.
  Discontinuous,
};

/// State (x1, x2, x3): capacitor charge, capacitor current, current through
/// L2. Diode constraints: x2 - x3 >= 0 and x2 >= 0 (shifted by G u in the
/// discontinuous variant). x0 = 0.
LCSystem diode_circuit(CircuitVariant variant, const CircuitParameters& params = {});

/// The metric P = diag(1, L3, L2) satisfying P B = C^T.
Matrix diode_circuit_metric(const CircuitParameters& params = {});

}  // namespace sweep
