#include "lpbox/geometry.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace lpbox {

double sphere_radius_sq_gap(const Eigen::Ref<const Eigen::VectorXd>& v) {
    const double n = static_cast<double>(v.size());
    return (v.array() - 0.5).matrix().squaredNorm() - 0.25 * n;
}

Eigen::VectorXd project_sphere(const Eigen::Ref<const Eigen::VectorXd>& v) {
    const Eigen::Index n = v.size();
    if (n < 1) throw std::invalid_argument("empty vector");
    const double radius = 0.5 * std::sqrt(static_cast<double>(n));
    Eigen::VectorXd u = v.array() - 0.5;
    const double norm = u.norm();
    Eigen::VectorXd out(n);
    if (norm == 0.0) {
        out.setConstant(0.5);
        out[0] += radius;
        return out;
    }
    out = (radius / norm) * u;
    out.array() += 0.5;
    return out;
}

std::vector<std::uint8_t> greedy_odd_set(const Eigen::Ref<const Eigen::VectorXd>& v) {
    const Eigen::Index d = v.size();
    if (d < 1) throw std::invalid_argument("empty vector");
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(d), 0);
    int size = 0;
    for (Eigen::Index i = 0; i < d; ++i) {
        if (v[i] > 0.5) {
            mask[static_cast<std::size_t>(i)] = 1;
            ++size;
        }
    }
    if (size % 2 == 0) {
        Eigen::Index flip = 0;
        double best = std::abs(v[0] - 0.5);
        for (Eigen::Index i = 1; i < d; ++i) {
            const double dist = std::abs(v[i] - 0.5);
            if (dist < best) {
                best = dist;
                flip = i;
            }
        }
        mask[static_cast<std::size_t>(flip)] ^= 1u;
    }
    return mask;
}

double odd_set_lhs(const Eigen::Ref<const Eigen::VectorXd>& v,
                   const std::vector<std::uint8_t>& mask) {
    double lhs = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        lhs += mask[static_cast<std::size_t>(i)] ? v[i] : -v[i];
    return lhs;
}

bool pp_contains(const Eigen::Ref<const Eigen::VectorXd>& v, double tol) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (v[i] < -tol || v[i] > 1.0 + tol) return false;
    const auto mask = greedy_odd_set(v);
    const int size = static_cast<int>(std::count(mask.begin(), mask.end(), 1));
    return odd_set_lhs(v, mask) <= static_cast<double>(size - 1) + tol;
}

Eigen::VectorXd project_box_sum_slice(const Eigen::Ref<const Eigen::VectorXd>& w, double budget) {
    Eigen::VectorXd clamped = project_box(w);
    if (clamped.sum() <= budget) return clamped;

    // Otherwise the projection is clamp(w - theta) with theta > 0 chosen so
    // f(theta) = sum_i clamp(w_i - theta, 0, 1) = budget. f is continuous,
    // piecewise linear, nonincreasing; its breakpoints are w_i - 1 (coordinate
    // i stops saturating at 1) and w_i (it reaches 0). Sweep the sorted
    // breakpoints tracking how many coordinates are saturated vs linear.
    const Eigen::Index d = w.size();
    struct Event {
        double theta;
        int enter;  // 1: coordinate enters the linear piece, 0: it reaches zero
        Eigen::Index i;
    };
    std::vector<Event> events;
    events.reserve(static_cast<std::size_t>(2 * d));
    for (Eigen::Index i = 0; i < d; ++i) {
        events.push_back({w[i] - 1.0, 1, i});
        events.push_back({w[i], 0, i});
    }
    std::sort(events.begin(), events.end(),
              [](const Event& a, const Event& b) { return a.theta < b.theta; });

    double n_sat = static_cast<double>(d);  // value of f left of all breakpoints
    double n_lin = 0.0;
    double lin_sum = 0.0;
    double lo = -std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e <= events.size(); ++e) {
        const double hi =
            e < events.size() ? events[e].theta : std::numeric_limits<double>::infinity();
        // On [lo, hi]: f(theta) = n_sat + lin_sum - n_lin * theta. Since f is
        // nonincreasing, the first segment whose solve does not overshoot hi
        // holds the crossing; clamping to lo absorbs roundoff when the
        // crossing sits exactly on a breakpoint.
        if (n_lin > 0.0) {
            const double theta = (n_sat + lin_sum - budget) / n_lin;
            if (theta <= hi)
                return project_box((w.array() - std::max(theta, lo)).matrix());
        }
        if (e == events.size()) break;
        if (events[e].enter) {
            n_sat -= 1.0;
            n_lin += 1.0;
            lin_sum += w[events[e].i];
        } else {
            n_lin -= 1.0;
            lin_sum -= w[events[e].i];
        }
        lo = hi;
    }
    // f(theta) = budget always has a solution for budget in [0, f(0)); not reached.
    throw std::logic_error("box-sum slice projection failed to bracket theta");
}

Eigen::VectorXd project_pp(const Eigen::Ref<const Eigen::VectorXd>& v) {
    const Eigen::Index d = v.size();
    if (d < 1) throw std::invalid_argument("empty vector");

    Eigen::VectorXd z = project_box(v);
    const auto mask = greedy_odd_set(z);
    const int size = static_cast<int>(std::count(mask.begin(), mask.end(), 1));
    if (odd_set_lhs(z, mask) <= static_cast<double>(size - 1)) return z;

    // The projection lies on the violated facet. Flipping the complement
    // coordinates (t -> 1 - t outside the odd set) is an isometry sending the
    // facet's halfspace to { sum t_i <= d-1 }; project there and flip back.
    Eigen::VectorXd w(d);
    for (Eigen::Index i = 0; i < d; ++i)
        w[i] = mask[static_cast<std::size_t>(i)] ? v[i] : 1.0 - v[i];
    Eigen::VectorXd t = project_box_sum_slice(w, static_cast<double>(d) - 1.0);
    Eigen::VectorXd out(d);
    for (Eigen::Index i = 0; i < d; ++i)
        out[i] = mask[static_cast<std::size_t>(i)] ? t[i] : 1.0 - t[i];
    return out;
}

std::vector<Eigen::VectorXd> even_weight_vertices(int d) {
    if (d < 1 || d > 24) throw std::invalid_argument("even_weight_vertices: d out of range");
    std::vector<Eigen::VectorXd> out;
    out.reserve(std::size_t{1} << (d - 1));
    for (std::uint32_t bits = 0; bits < (std::uint32_t{1} << d); ++bits) {
        if (std::popcount(bits) % 2 != 0) continue;
        Eigen::VectorXd v(d);
        for (int i = 0; i < d; ++i) v[i] = (bits >> i) & 1u ? 1.0 : 0.0;
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace lpbox
