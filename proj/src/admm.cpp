#include "lpbox/admm.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "lpbox/geometry.hpp"

namespace lpbox {

namespace {

double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

void check_gamma(const ParityCheckMatrix& h, const Eigen::Ref<const Eigen::VectorXd>& gamma) {
    if (gamma.size() != h.n_vars())
        throw std::invalid_argument("llr length " + std::to_string(gamma.size()) +
                                    " does not match code length " + std::to_string(h.n_vars()));
    if (!gamma.allFinite()) throw std::invalid_argument("llr vector has non-finite entries");
}

// accum_i = sum_{j in N(i)} (mu z_j^(i) - lambda1_j^(i)), accumulated in check
// order so the summation order is fixed.
void accumulate_check_terms(const ParityCheckMatrix& h, const AdmmState& s, double mu,
                            Eigen::VectorXd& accum) {
    accum.setZero(h.n_vars());
    for (int j = 0; j < h.n_checks(); ++j) {
        const auto& vars = h.check_vars(j);
        const Eigen::VectorXd& zj = s.z[static_cast<std::size_t>(j)];
        const Eigen::VectorXd& lj = s.lambda1[static_cast<std::size_t>(j)];
        for (std::size_t p = 0; p < vars.size(); ++p) {
            const auto t = static_cast<Eigen::Index>(p);
            accum[vars[p]] += mu * zj[t] - lj[t];
        }
    }
}

void z_update(AdmmState& s, double mu, const ParityCheckMatrix& h) {
    for (int j = 0; j < h.n_checks(); ++j) {
        const auto& vars = h.check_vars(j);
        const Eigen::VectorXd& lj = s.lambda1[static_cast<std::size_t>(j)];
        Eigen::VectorXd v = gather(s.x, vars) + lj / mu;
        s.z[static_cast<std::size_t>(j)] = project_pp(v);
    }
}

// lambda1_j += mu (P_j x - z_j); returns max_j ||P_j x - z_j||_inf.
double dual_update_checks(AdmmState& s, double mu, const ParityCheckMatrix& h) {
    double res = 0.0;
    for (int j = 0; j < h.n_checks(); ++j) {
        const auto& vars = h.check_vars(j);
        Eigen::VectorXd diff = gather(s.x, vars) - s.z[static_cast<std::size_t>(j)];
        s.lambda1[static_cast<std::size_t>(j)] += mu * diff;
        res = std::max(res, diff.lpNorm<Eigen::Infinity>());
    }
    return res;
}

void check_common_params(double epsilon, int max_iters) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
}

void check_init_state(const AdmmState& s, const ParityCheckMatrix& h, bool with_sphere) {
    if (s.x.size() != h.n_vars()) throw std::invalid_argument("init state: x has wrong length");
    if (with_sphere && s.y.size() != h.n_vars())
        throw std::invalid_argument("init state: y has wrong length");
    if (with_sphere && s.lambda2.size() != h.n_vars())
        throw std::invalid_argument("init state: lambda2 has wrong length");
    const auto m = static_cast<std::size_t>(h.n_checks());
    if (s.z.size() != m || s.lambda1.size() != m)
        throw std::invalid_argument("init state: per-check block count mismatch");
    for (int j = 0; j < h.n_checks(); ++j) {
        const auto u = static_cast<std::size_t>(j);
        if (s.z[u].size() != h.check_degree(j) || s.lambda1[u].size() != h.check_degree(j))
            throw std::invalid_argument("init state: per-check block length mismatch");
    }
}

DecodeResult finish(const ParityCheckMatrix& h, const Eigen::Ref<const Eigen::VectorXd>& gamma,
                    const AdmmState& s, Termination term,
                    std::chrono::steady_clock::time_point t0) {
    DecodeResult r;
    r.word = round_to_word(s.x);
    r.is_valid_codeword = is_codeword(h, r.word);
    r.iterations = s.iter;
    r.termination = term;
    r.objective = gamma.dot(s.x);
    r.x = s.x;
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

}  // namespace

void validate(const L2BoxParams& p) {
    if (!(p.mu1 > 0.0) || !(p.mu2 > 0.0))
        throw std::invalid_argument("mu1 and mu2 must be positive");
    check_common_params(p.epsilon, p.max_iters);
}

void validate(const PenalizedParams& p, const ParityCheckMatrix& h) {
    if (!(p.mu > 0.0)) throw std::invalid_argument("mu must be positive");
    if (p.alpha < 0.0) throw std::invalid_argument("alpha must be nonnegative");
    check_common_params(p.epsilon, p.max_iters);
    const double min_deg = h.n_vars() > 0 ? static_cast<double>(h.min_var_degree()) : 0.0;
    if (!(p.mu * min_deg > 2.0 * p.alpha))
        throw std::invalid_argument(
            "penalized x-step not strictly convex: need mu * min variable degree > 2 * alpha "
            "(mu=" +
            std::to_string(p.mu) + ", min degree=" + std::to_string(static_cast<int>(min_deg)) +
            ", alpha=" + std::to_string(p.alpha) + ")");
}

const char* to_string(Termination t) {
    switch (t) {
        case Termination::converged: return "converged";
        case Termination::max_iters: return "max_iters";
        case Termination::early_codeword: return "early_codeword";
    }
    return "unknown";
}

BinaryWord round_to_word(const Eigen::Ref<const Eigen::VectorXd>& x) {
    BinaryWord w(static_cast<std::size_t>(x.size()));
    for (Eigen::Index i = 0; i < x.size(); ++i)
        w[static_cast<std::size_t>(i)] = x[i] > 0.5 ? 1 : 0;
    return w;
}

AdmmState l2box_init(const ParityCheckMatrix& h) {
    AdmmState s;
    const int n = h.n_vars();
    s.x = Eigen::VectorXd::Constant(n, 0.5);
    s.y = project_sphere(s.x);  // center has no nearest point; deterministic fallback
    s.lambda2 = Eigen::VectorXd::Zero(n);
    s.z.resize(static_cast<std::size_t>(h.n_checks()));
    s.lambda1.resize(static_cast<std::size_t>(h.n_checks()));
    for (int j = 0; j < h.n_checks(); ++j) {
        const auto u = static_cast<std::size_t>(j);
        const int d = h.check_degree(j);
        s.z[u] = project_pp(Eigen::VectorXd::Constant(d, 0.5));
        s.lambda1[u] = Eigen::VectorXd::Zero(d);
    }
    return s;
}

void l2box_x_update(AdmmState& s, const Eigen::Ref<const Eigen::VectorXd>& gamma,
                    const L2BoxParams& p, const ParityCheckMatrix& h) {
    Eigen::VectorXd accum;
    accumulate_check_terms(h, s, p.mu1, accum);
    for (int i = 0; i < h.n_vars(); ++i) {
        const double num = accum[i] - gamma[i] - s.lambda2[i] + p.mu2 * s.y[i];
        const double den = p.mu1 * h.var_degree(i) + p.mu2;
        s.x[i] = clamp01(num / den);
    }
}

void l2box_y_update(AdmmState& s, const L2BoxParams& p) {
    Eigen::VectorXd v = (0.5 + (p.mu2 * (s.x.array() - 0.5) + s.lambda2.array())).matrix();
    s.y = project_sphere(v);
}

void l2box_z_update(AdmmState& s, const L2BoxParams& p, const ParityCheckMatrix& h) {
    z_update(s, p.mu1, h);
}

void l2box_dual_update(AdmmState& s, const L2BoxParams& p, const ParityCheckMatrix& h) {
    s.primal_residual_pp = dual_update_checks(s, p.mu1, h);
    Eigen::VectorXd diff = s.x - s.y;
    s.lambda2 += p.mu2 * diff;
    s.primal_residual_box = diff.lpNorm<Eigen::Infinity>();
}

DecodeResult l2box_decode(const ParityCheckMatrix& h,
                          const Eigen::Ref<const Eigen::VectorXd>& gamma,
                          const L2BoxParams& params, const std::optional<AdmmState>& init,
                          const IterationCallback& on_iteration) {
    const auto t0 = std::chrono::steady_clock::now();
    validate(params);
    check_gamma(h, gamma);
    AdmmState s = init ? *init : l2box_init(h);
    if (init) check_init_state(s, h, /*with_sphere=*/true);

    Termination term = Termination::max_iters;
    for (int k = 1; k <= params.max_iters; ++k) {
        l2box_x_update(s, gamma, params, h);
        l2box_y_update(s, params);
        l2box_z_update(s, params, h);
        l2box_dual_update(s, params, h);
        s.iter = k;
        if (on_iteration) on_iteration(s);
        if (s.primal_residual_pp < params.epsilon && s.primal_residual_box < params.epsilon) {
            term = Termination::converged;
            break;
        }
        if (params.early_exit_on_codeword && is_codeword(h, round_to_word(s.x))) {
            term = Termination::early_codeword;
            break;
        }
    }
    return finish(h, gamma, s, term, t0);
}

DecodeResult penalized_decode(const ParityCheckMatrix& h,
                              const Eigen::Ref<const Eigen::VectorXd>& gamma,
                              const PenalizedParams& params,
                              const IterationCallback& on_iteration) {
    const auto t0 = std::chrono::steady_clock::now();
    validate(params, h);
    check_gamma(h, gamma);

    AdmmState s;
    const int n = h.n_vars();
    s.x = Eigen::VectorXd::Constant(n, 0.5);
    s.z.resize(static_cast<std::size_t>(h.n_checks()));
    s.lambda1.resize(static_cast<std::size_t>(h.n_checks()));
    for (int j = 0; j < h.n_checks(); ++j) {
        const auto u = static_cast<std::size_t>(j);
        const int d = h.check_degree(j);
        s.z[u] = project_pp(Eigen::VectorXd::Constant(d, 0.5));
        s.lambda1[u] = Eigen::VectorXd::Zero(d);
    }
    s.primal_residual_box = 0.0;

    Eigen::VectorXd accum;
    Termination term = Termination::max_iters;
    for (int k = 1; k <= params.max_iters; ++k) {
        accumulate_check_terms(h, s, params.mu, accum);
        for (int i = 0; i < n; ++i) {
            const double num = accum[i] - gamma[i] - params.alpha;
            const double den = params.mu * h.var_degree(i) - 2.0 * params.alpha;
            s.x[i] = clamp01(num / den);
        }
        z_update(s, params.mu, h);
        s.primal_residual_pp = dual_update_checks(s, params.mu, h);
        s.iter = k;
        if (on_iteration) on_iteration(s);
        if (s.primal_residual_pp < params.epsilon) {
            term = Termination::converged;
            break;
        }
        if (params.early_exit_on_codeword && is_codeword(h, round_to_word(s.x))) {
            term = Termination::early_codeword;
            break;
        }
    }
    return finish(h, gamma, s, term, t0);
}

IterationCallback make_csv_trace(std::ostream& os, Eigen::VectorXd gamma) {
    os << "iteration,residual_pp,residual_box,objective\n";
    return [&os, gamma = std::move(gamma)](const AdmmState& s) {
        os << s.iter << ',' << s.primal_residual_pp << ',' << s.primal_residual_box << ','
           << gamma.dot(s.x) << '\n';
    };
}

}  // namespace lpbox
