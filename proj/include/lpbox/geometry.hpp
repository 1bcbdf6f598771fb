#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace lpbox {

// Componentwise clamp to [0,1]. Works on any Eigen expression.
template <typename Derived>
auto project_box(const Eigen::MatrixBase<Derived>& v) {
    using S = typename Derived::Scalar;
    return v.cwiseMax(S(0)).cwiseMin(S(1));
}

/// ||v - 0.5*1||^2 - N/4. Zero (to tolerance) means v is on the sphere through
/// the binary points; for v in the box this happens exactly at binary v.
double sphere_radius_sq_gap(const Eigen::Ref<const Eigen::VectorXd>& v);

/// Projection onto the sphere centered at 0.5*1 with radius sqrt(N)/2.
/// The exact center has no nearest point; it maps to center + radius*e_1 so the
/// function is total and deterministic.
Eigen::VectorXd project_sphere(const Eigen::Ref<const Eigen::VectorXd>& v);

/// Odd-cardinality index set maximizing the facet violation
/// sum_{i in S} v_i - sum_{i not in S} v_i - (|S| - 1): all coordinates above
/// 1/2, parity fixed by toggling the coordinate closest to 1/2 (lowest index
/// on ties). Returned as a 0/1 mask.
std::vector<std::uint8_t> greedy_odd_set(const Eigen::Ref<const Eigen::VectorXd>& v);

/// sum_{i in S} v_i - sum_{i not in S} v_i for a mask S.
double odd_set_lhs(const Eigen::Ref<const Eigen::VectorXd>& v,
                   const std::vector<std::uint8_t>& mask);

/// Membership in the parity polytope PP_d (convex hull of the even-weight
/// binary vectors): box constraints and the most-violated odd-set facet, both
/// within tol. After box feasibility only one facet can be violated, so the
/// greedy set decides membership.
bool pp_contains(const Eigen::Ref<const Eigen::VectorXd>& v, double tol = 1e-7);

/// Euclidean projection onto PP_d. Clamp to the box; if the greedy odd-set
/// facet is violated, the projection lies on that facet: flip the complement
/// coordinates, project onto { t in [0,1]^d : sum t_i <= d-1 }, flip back.
/// O(d log d).
Eigen::VectorXd project_pp(const Eigen::Ref<const Eigen::VectorXd>& v);

/// Projection onto { t in [0,1]^d : sum t_i <= budget }. Sort + linear sweep.
Eigen::VectorXd project_box_sum_slice(const Eigen::Ref<const Eigen::VectorXd>& w, double budget);

/// All even-weight binary vectors of length d (guarded to d <= 24).
std::vector<Eigen::VectorXd> even_weight_vertices(int d);

}  // namespace lpbox
