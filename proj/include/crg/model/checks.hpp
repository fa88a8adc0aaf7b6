#pragma once

#include <limits>
#include <string>
#include <vector>

#include "crg/model/controller.hpp"

namespace crg::model {

// One checked structural property of a closed loop, with the numeric
// residual that backs the verdict.
struct StructuralCheckItem {
  std::string name;
  bool pass = false;
  double residual = 0.0;
};

struct StructuralCheckReport {
  bool all_pass = true;
  std::vector<StructuralCheckItem> items;
};

// Verifies the structural properties the design rests on, each numerically
// at tolerance `tol` (default 1e-8):
//   - "schur":            spectral radius of Phi is below one (the residual
//                         reported is the spectral radius itself);
//   - "dc_gain_identity": Upsilon (I - Phi)⁻¹ Gamma = I;
//   - "coupling_rejection[j]":  Upsilon (I - Phi)⁻¹ Phi_in[j] = 0 for every
//                         inlet neighbor j.
// State measurability is a modeling premise, not a matrix property, so it
// has no numeric item here.
StructuralCheckReport check_structural_properties(const ClosedLoopSubsystem& cl,
                                                  double tol = 1e-8);

}  // namespace crg::model
