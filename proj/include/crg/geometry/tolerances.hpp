#pragma once

// Single home for every geometric tolerance, so the numeric contracts of the
// set algebra are auditable in one place.

namespace crg::geometry {

// Vertex/row deduplication and membership slop (absolute, on unit-norm rows).
inline constexpr double kDedupTol = 1e-8;

// Slack allowed when declaring a half-space redundant: a row is redundant iff
// the maximum of its normal over the set is ≤ offset + kRedundancyTol.
inline constexpr double kRedundancyTol = 1e-9;

// Half-width of the paired-inequality band encoding flat (lower-dimensional)
// sets: a flat set adds rows ±nᵀx ≤ nᵀc ± kFlatTol per normal direction n.
inline constexpr double kFlatTol = 1e-7;

// Primal feasibility threshold inside the simplex solver; LP argmax points
// satisfy every (unit-norm) row to this slack.
inline constexpr double kLpFeasTol = 1e-9;

// Artificial ±x_i ≤ kBigBox bounds appended by the LP so that every instance
// starts from a dual-feasible vertex.  All real sets live far inside; the
// value is kept moderate so dot products at the artificial corner stay
// well-conditioned against the feasibility threshold.
inline constexpr double kBigBox = 1e6;

}  // namespace crg::geometry
