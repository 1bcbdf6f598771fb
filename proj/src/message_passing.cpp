#include "lpbox/message_passing.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lpbox {

namespace {

double clip(double v, double bound) { return v < -bound ? -bound : (v > bound ? bound : v); }

double sgn(double v) { return v < 0.0 ? -1.0 : 1.0; }

void check_node_sum_product(const Eigen::Ref<const Eigen::VectorXd>& in,
                            Eigen::Ref<Eigen::VectorXd> out) {
    const Eigen::Index d = in.size();
    // Forward/backward partial products of tanh(in/2); identity 1.
    Eigen::VectorXd fwd(d + 1), bwd(d + 1);
    fwd[0] = 1.0;
    for (Eigen::Index t = 0; t < d; ++t) fwd[t + 1] = fwd[t] * std::tanh(0.5 * in[t]);
    bwd[d] = 1.0;
    for (Eigen::Index t = d; t-- > 0;) bwd[t] = bwd[t + 1] * std::tanh(0.5 * in[t]);
    for (Eigen::Index t = 0; t < d; ++t) out[t] = 2.0 * std::atanh(fwd[t] * bwd[t + 1]);
}

void check_node_min_sum(const Eigen::Ref<const Eigen::VectorXd>& in,
                        Eigen::Ref<Eigen::VectorXd> out, double scale) {
    const Eigen::Index d = in.size();
    double min1 = std::numeric_limits<double>::infinity();
    double min2 = std::numeric_limits<double>::infinity();
    Eigen::Index argmin = -1;
    double sign_all = 1.0;
    for (Eigen::Index t = 0; t < d; ++t) {
        sign_all *= sgn(in[t]);
        const double mag = std::abs(in[t]);
        if (mag < min1) {
            min2 = min1;
            min1 = mag;
            argmin = t;
        } else if (mag < min2) {
            min2 = mag;
        }
    }
    for (Eigen::Index t = 0; t < d; ++t)
        out[t] = scale * sign_all * sgn(in[t]) * (t == argmin ? min2 : min1);
}

}  // namespace

void validate(const MpParams& p) {
    if (p.max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
    if (!(p.normalization > 0.0) || p.normalization > 1.0)
        throw std::invalid_argument("normalization must lie in (0, 1]");
    if (!(p.llr_clip > 0.0)) throw std::invalid_argument("llr_clip must be positive");
}

const char* to_string(MpVariant v) {
    switch (v) {
        case MpVariant::sum_product: return "sum_product";
        case MpVariant::min_sum: return "min_sum";
        case MpVariant::normalized_min_sum: return "normalized_min_sum";
    }
    return "unknown";
}

void check_node_update(const Eigen::Ref<const Eigen::VectorXd>& in, MpVariant variant,
                       double normalization, Eigen::Ref<Eigen::VectorXd> out) {
    if (out.size() != in.size()) throw std::invalid_argument("check_node_update: size mismatch");
    if (in.size() == 0) return;
    switch (variant) {
        case MpVariant::sum_product: check_node_sum_product(in, out); break;
        case MpVariant::min_sum: check_node_min_sum(in, out, 1.0); break;
        case MpVariant::normalized_min_sum: check_node_min_sum(in, out, normalization); break;
    }
}

DecodeResult mp_decode(const ParityCheckMatrix& h, const Eigen::Ref<const Eigen::VectorXd>& gamma,
                       const MpParams& params) {
    const auto t0 = std::chrono::steady_clock::now();
    validate(params);
    if (gamma.size() != h.n_vars())
        throw std::invalid_argument("llr length does not match code length");
    if (!gamma.allFinite()) throw std::invalid_argument("llr vector has non-finite entries");

    const int n = h.n_vars();
    const int m = h.n_checks();
    // Edges in CSR-by-check order; per-variable edge lists for the other side.
    std::vector<int> offset(static_cast<std::size_t>(m) + 1, 0);
    for (int j = 0; j < m; ++j) offset[static_cast<std::size_t>(j) + 1] = offset[j] + h.check_degree(j);
    const int n_edges = offset[static_cast<std::size_t>(m)];
    std::vector<std::vector<int>> var_edges(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) var_edges[static_cast<std::size_t>(i)].reserve(h.var_checks(i).size());
    for (int j = 0; j < m; ++j) {
        const auto& vars = h.check_vars(j);
        for (std::size_t p = 0; p < vars.size(); ++p)
            var_edges[static_cast<std::size_t>(vars[p])].push_back(offset[j] + static_cast<int>(p));
    }

    Eigen::VectorXd v2c(n_edges), c2v = Eigen::VectorXd::Zero(n_edges);
    for (int j = 0; j < m; ++j) {
        const auto& vars = h.check_vars(j);
        for (std::size_t p = 0; p < vars.size(); ++p)
            v2c[offset[j] + static_cast<Eigen::Index>(p)] = clip(gamma[vars[p]], params.llr_clip);
    }

    Eigen::VectorXd posterior = gamma;
    BinaryWord word(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) word[static_cast<std::size_t>(i)] = gamma[i] < 0.0 ? 1 : 0;
    Termination term = Termination::max_iters;
    int iters = 0;
    for (int t = 1; t <= params.max_iters; ++t) {
        for (int j = 0; j < m; ++j) {
            const int d = h.check_degree(j);
            check_node_update(v2c.segment(offset[j], d), params.variant, params.normalization,
                              c2v.segment(offset[j], d));
        }
        for (int e = 0; e < n_edges; ++e) c2v[e] = clip(c2v[e], params.llr_clip);

        for (int i = 0; i < n; ++i) {
            double total = gamma[i];
            for (int e : var_edges[static_cast<std::size_t>(i)]) total += c2v[e];
            posterior[i] = total;
            for (int e : var_edges[static_cast<std::size_t>(i)])
                v2c[e] = clip(total - c2v[e], params.llr_clip);
            word[static_cast<std::size_t>(i)] = total < 0.0 ? 1 : 0;
        }

        iters = t;
        if (is_codeword(h, word)) {
            term = Termination::early_codeword;
            break;
        }
    }

    DecodeResult r;
    r.word = word;
    r.is_valid_codeword = is_codeword(h, word);
    r.iterations = iters;
    r.termination = term;
    r.x.resize(n);
    for (int i = 0; i < n; ++i) r.x[i] = word[static_cast<std::size_t>(i)];
    r.objective = gamma.dot(r.x);
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

}  // namespace lpbox
