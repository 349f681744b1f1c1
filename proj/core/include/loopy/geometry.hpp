#pragma once

#include <span>
#include <vector>

#include "loopy/types.hpp"

namespace loopy {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// External joint angles theta_m (radians), one per cell.
struct JointAngles {
  std::vector<double> theta;

  std::size_t size() const { return theta.size(); }
};

/// Embedded closed-chain polygon plus its constraint diagnostics. Invalid
/// geometry (open or self-crossing) is reported, never thrown: transient
/// invalid shapes are part of normal parameter trajectories.
struct PolygonGeometry {
  std::vector<Vec2> vertices;        // N joints, vertex 0 at the origin
  std::vector<Vec2> segments;        // N directed edges of length s
  Vec2 closure_residual;             // endpoint gap of the open chain
  double angle_sum_error = 0.0;      // sum(theta) - 2*pi
  bool self_intersects = false;
};

/// theta_m = q_pas_m + q_act_m.
JointAngles angles_from_morphogens(const MorphogenState& state);

/// Builds the polygon with vertex 0 at the origin and reference heading 0;
/// segment m's heading is the running sum theta_1 + ... + theta_m.
PolygonGeometry reconstruct_polygon(const JointAngles& angles, double cell_length);

/// Closed-segment intersection via orientation predicates, including the
/// collinear-overlap case. Adjacent cells sharing a joint are the caller's
/// business to exclude.
bool segment_pair_intersects(Vec2 a1, Vec2 a2, Vec2 b1, Vec2 b2);

/// Crossing points of non-adjacent segment pairs (used for render markers).
std::vector<Vec2> self_intersection_points(const PolygonGeometry& geometry);

inline constexpr double kProjectionTol = 1e-9;
inline constexpr int kProjectionMaxIter = 100;

/// Nearest (least-squares) joint configuration satisfying both the closure
/// constraint and sum(theta) = 2*pi. Stand-in for the physical links
/// absorbing constraint violations. Throws ProjectionFailed when the
/// iteration does not reach tol within max_iter.
JointAngles project_to_closure(const JointAngles& angles, double cell_length,
                               double tol = kProjectionTol,
                               int max_iter = kProjectionMaxIter);

}  // namespace loopy
