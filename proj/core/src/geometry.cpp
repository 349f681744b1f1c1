#include "loopy/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace loopy {
namespace {

double orient(Vec2 a, Vec2 b, Vec2 c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
  // p assumed collinear with a-b
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

// Solves the 3x3 system A x = b in place with partial pivoting.
bool solve3(std::array<std::array<double, 3>, 3>& A, std::array<double, 3>& b) {
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::fabs(A[r][col]) > std::fabs(A[pivot][col])) pivot = r;
    if (std::fabs(A[pivot][col]) < 1e-300) return false;
    std::swap(A[col], A[pivot]);
    std::swap(b[col], b[pivot]);
    for (int r = col + 1; r < 3; ++r) {
      const double f = A[r][col] / A[col][col];
      for (int c = col; c < 3; ++c) A[r][c] -= f * A[col][c];
      b[r] -= f * b[col];
    }
  }
  for (int col = 2; col >= 0; --col) {
    for (int r = 0; r < col; ++r) {
      b[r] -= A[r][col] / A[col][col] * b[col];
      A[r][col] = 0.0;
    }
    b[col] /= A[col][col];
  }
  return true;
}

struct Constraints {
  double gx, gy, gsum;           // closure x/y and angle-sum residuals
  std::vector<double> heading;   // heading of each segment
};

Constraints evaluate_constraints(std::span<const double> theta, double s) {
  const std::size_t n = theta.size();
  Constraints c;
  c.heading.resize(n);
  double h = 0.0, sx = 0.0, sy = 0.0, sum = theta[0];
  c.heading[0] = 0.0;
  sx = s;  // segment 0 has heading 0
  for (std::size_t m = 1; m < n; ++m) {
    h += theta[m];
    sum += theta[m];
    c.heading[m] = h;
    sx += s * std::cos(h);
    sy += s * std::sin(h);
  }
  c.gx = sx;
  c.gy = sy;
  c.gsum = sum - 2.0 * std::numbers::pi;
  return c;
}

}  // namespace

JointAngles angles_from_morphogens(const MorphogenState& state) {
  JointAngles a;
  a.theta.resize(state.size());
  for (std::size_t m = 0; m < state.size(); ++m)
    a.theta[m] = state.q_pas[m] + state.q_act[m];
  return a;
}

PolygonGeometry reconstruct_polygon(const JointAngles& angles, double cell_length) {
  const std::size_t n = angles.size();
  if (n < 3) throw ConfigError("reconstruct_polygon needs at least 3 cells");
  if (!(cell_length > 0.0)) throw ConfigError("cell_length must be > 0");

  PolygonGeometry g;
  g.vertices.resize(n);
  g.segments.resize(n);
  double heading = 0.0;
  double sum = angles.theta[0];
  Vec2 v{0.0, 0.0};
  for (std::size_t m = 0; m < n; ++m) {
    if (m > 0) {
      heading += angles.theta[m];
      sum += angles.theta[m];
    }
    g.vertices[m] = v;
    g.segments[m] = {cell_length * std::cos(heading), cell_length * std::sin(heading)};
    v.x += g.segments[m].x;
    v.y += g.segments[m].y;
  }
  g.closure_residual = {-v.x, -v.y};
  g.angle_sum_error = sum - 2.0 * std::numbers::pi;

  g.self_intersects = false;
  for (std::size_t i = 0; i + 1 < n && !g.self_intersects; ++i) {
    const Vec2 a1 = g.vertices[i];
    const Vec2 a2{a1.x + g.segments[i].x, a1.y + g.segments[i].y};
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // adjacent around the wrap
      const Vec2 b1 = g.vertices[j];
      const Vec2 b2{b1.x + g.segments[j].x, b1.y + g.segments[j].y};
      if (segment_pair_intersects(a1, a2, b1, b2)) {
        g.self_intersects = true;
        break;
      }
    }
  }
  return g;
}

bool segment_pair_intersects(Vec2 a1, Vec2 a2, Vec2 b1, Vec2 b2) {
  const int o1 = sign(orient(a1, a2, b1));
  const int o2 = sign(orient(a1, a2, b2));
  const int o3 = sign(orient(b1, b2, a1));
  const int o4 = sign(orient(b1, b2, a2));
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a1, a2, b1)) return true;
  if (o2 == 0 && on_segment(a1, a2, b2)) return true;
  if (o3 == 0 && on_segment(b1, b2, a1)) return true;
  if (o4 == 0 && on_segment(b1, b2, a2)) return true;
  return false;
}

std::vector<Vec2> self_intersection_points(const PolygonGeometry& geometry) {
  std::vector<Vec2> points;
  const std::size_t n = geometry.segments.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Vec2 a1 = geometry.vertices[i];
    const Vec2 da = geometry.segments[i];
    const Vec2 a2{a1.x + da.x, a1.y + da.y};
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      const Vec2 b1 = geometry.vertices[j];
      const Vec2 db = geometry.segments[j];
      const Vec2 b2{b1.x + db.x, b1.y + db.y};
      if (!segment_pair_intersects(a1, a2, b1, b2)) continue;
      const double denom = da.x * db.y - da.y * db.x;
      if (std::fabs(denom) > 1e-12) {
        const double t = ((b1.x - a1.x) * db.y - (b1.y - a1.y) * db.x) / denom;
        points.push_back({a1.x + t * da.x, a1.y + t * da.y});
      } else {
        // collinear overlap: mark the midpoint of the shared extent
        points.push_back({(std::max(std::min(a1.x, a2.x), std::min(b1.x, b2.x)) +
                           std::min(std::max(a1.x, a2.x), std::max(b1.x, b2.x))) / 2.0,
                          (std::max(std::min(a1.y, a2.y), std::min(b1.y, b2.y)) +
                           std::min(std::max(a1.y, a2.y), std::max(b1.y, b2.y))) / 2.0});
      }
    }
  }
  return points;
}

JointAngles project_to_closure(const JointAngles& angles, double cell_length,
                               double tol, int max_iter) {
  const std::size_t n = angles.size();
  if (n < 3) throw ConfigError("project_to_closure needs at least 3 cells");
  const std::vector<double>& target = angles.theta;
  std::vector<double> theta = target;

  double residual = 0.0;
  // Converged means feasible AND the last SQP step was tiny: feasibility
  // alone can be reached while the tangential (optimality) component of the
  // step is still moving, so both are required for the least-squares answer.
  double step_norm = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < max_iter; ++iter) {
    const Constraints c = evaluate_constraints(theta, cell_length);
    residual = std::sqrt(c.gx * c.gx + c.gy * c.gy + c.gsum * c.gsum);
    if (std::hypot(c.gx, c.gy) <= tol && std::fabs(c.gsum) <= tol && step_norm <= tol) {
      JointAngles out;
      out.theta = std::move(theta);
      return out;
    }

    // Jacobian rows: closure-x, closure-y, angle sum. Suffix sums give
    // d(gx)/d(theta_k) = -s * sum_{m>=k} sin(heading_m) (theta_0 turns the
    // fixed reference heading, so it only enters the angle-sum row).
    std::vector<double> jx(n, 0.0), jy(n, 0.0);
    double sx = 0.0, sy = 0.0;
    for (std::size_t k = n; k-- > 1;) {
      sx += -cell_length * std::sin(c.heading[k]);
      sy += cell_length * std::cos(c.heading[k]);
      jx[k] = sx;
      jy[k] = sy;
    }

    // SQP step for min ||theta' - target||^2 s.t. linearized constraints:
    // delta = r - J^T (J J^T)^{-1} (J r + g), with r = target - theta.
    std::array<std::array<double, 3>, 3> JJt{};
    std::array<double, 3> rhs{c.gx, c.gy, c.gsum};
    for (std::size_t k = 0; k < n; ++k) {
      const double r = target[k] - theta[k];
      JJt[0][0] += jx[k] * jx[k];
      JJt[0][1] += jx[k] * jy[k];
      JJt[0][2] += jx[k];
      JJt[1][1] += jy[k] * jy[k];
      JJt[1][2] += jy[k];
      rhs[0] += jx[k] * r;
      rhs[1] += jy[k] * r;
      rhs[2] += r;
    }
    JJt[1][0] = JJt[0][1];
    JJt[2][0] = JJt[0][2];
    JJt[2][1] = JJt[1][2];
    JJt[2][2] = static_cast<double>(n);

    if (!solve3(JJt, rhs))
      throw ProjectionFailed("closure projection hit a singular constraint Jacobian",
                             residual);
    step_norm = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double r = target[k] - theta[k];
      const double delta = r - (jx[k] * rhs[0] + jy[k] * rhs[1] + rhs[2]);
      theta[k] += delta;
      step_norm = std::max(step_norm, std::fabs(delta));
    }
  }
  throw ProjectionFailed("closure projection did not converge", residual);
}

}  // namespace loopy
