#include "sweep/circuit.hpp"

namespace sweep {

LCSystem diode_circuit(CircuitVariant variant, const CircuitParameters& c) {
  LCSystem sys;
  sys.A.resize(3, 3);
  sys.A << 0.0, 1.0, 0.0,
      -1.0 / (c.L3 * c.C4), -(c.R1 + c.R3) / c.L3, c.R1 / c.L3,
      0.0, c.R1 / c.L2, -(c.R1 + c.R2) / c.L2;
  sys.B.resize(3, 2);
  sys.B << 0.0, 0.0,
      1.0 / c.L3, 1.0 / c.L3,
      -1.0 / c.L2, 0.0;
  sys.C.resize(2, 3);
  sys.C << 0.0, 1.0, -1.0,
      0.0, 1.0, 0.0;
  sys.E.resize(3, 1);
  sys.E << 0.0, 1.0 / c.L3, 1.0 / c.L2;
  sys.F = Vector::Zero(2);
  sys.x0 = Vector::Zero(3);

  if (variant == CircuitVariant::Smooth) {
    sys.u = Signal({SineChannel{16.0, 3.0, -0.5}});
    sys.G = Matrix::Zero(2, 1);
  } else {
    sys.u = Signal({SignOfSineChannel{2.0}});
    sys.G.resize(2, 1);
    sys.G << 0.0, 1.0;
    sys.discontinuous_input = true;
  }
  return sys;
}

Matrix diode_circuit_metric(const CircuitParameters& c) {
  Matrix P = Matrix::Zero(3, 3);
  P.diagonal() << 1.0, c.L3, c.L2;
  return P;
}

}  // namespace sweep
