#pragma once

#include <string>
#include <vector>

#include "crg/model/controller.hpp"
#include "crg/sets/moas.hpp"
#include "crg/sets/mrpi.hpp"
#include "crg/sets/tightening.hpp"

namespace crg::sets {

struct SetSynthesisOptions {
  int k_max = 60;       // transient schedule length
  MrpiOptions mrpi;
  MoasOptions moas;
  // Optional per-stage enlargement of the admissible-chain interlacing
  // bounds (see moas_decentralized); empty reproduces the literal chain.
  std::map<int, geometry::Polytope> w_z_margin;
};

// Complete per-subsystem set synthesis product.
struct SubsystemSets {
  TighteningSchedule tightening;
  MoasSuite moas;
};

struct SetSynthesis {
  std::vector<SubsystemSets> subsystems;
  SetSynthesisOptions options;
};

// Runs the whole per-subsystem pipeline in cascade order:
//   1. interlacing disturbance expressions W_e (transient recursion);
//   2. transient tightened sequences XU(0..k_max);
//   3. invariant error bounds F_inf, chained through the upstream bounds
//      (the steady interlacing disturbance of stage i sums the invariant
//      sets of its inlets plus its own disturbance image);
//   4. steady tightened sets XU_inf;
//   5. the decentralized admissible-set chain (O_eps, O_z, W_z, XU_eps).
// The steady chain runs on the segment representation throughout, so the
// case-study boxes stay exact up to the documented budget reductions.
SetSynthesis synthesize_sets(const model::ClosedLoopCascade& chain,
                             const SetSynthesisOptions& options = {});

// Writes every synthesized set to `dir` in the half-space text format, one
// file per set (the transient schedule is represented by its first and
// last elements), plus a manifest.json listing per-subsystem set names,
// dimensions, facet counts, and file names.
void save_set_suite(const std::string& dir, const SetSynthesis& synthesis);

}  // namespace crg::sets
