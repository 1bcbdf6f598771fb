#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "lpbox/gf2.hpp"

namespace lpbox {

struct L2BoxParams {
    double mu1 = 50.0;
    double mu2 = 50.0;
    double epsilon = 1e-5;
    int max_iters = 1000;
    bool early_exit_on_codeword = false;
};

struct PenalizedParams {
    double alpha = 1.0;  // box-concavity penalty weight, >= 0
    double mu = 5.0;
    double epsilon = 1e-5;
    int max_iters = 1000;
    bool early_exit_on_codeword = true;
};

enum class Termination { converged, max_iters, early_codeword };

const char* to_string(Termination t);

/// Iterate of the ADMM decoders. The penalized decoder carries no sphere
/// block: y and lambda2 stay empty and primal_residual_box stays 0.
struct AdmmState {
    Eigen::VectorXd x;
    Eigen::VectorXd y;
    std::vector<Eigen::VectorXd> z;        // one vector of length d_j per check
    std::vector<Eigen::VectorXd> lambda1;  // one vector of length d_j per check
    Eigen::VectorXd lambda2;
    int iter = 0;
    double primal_residual_pp = std::numeric_limits<double>::infinity();
    double primal_residual_box = std::numeric_limits<double>::infinity();
};

struct DecodeResult {
    BinaryWord word;  // hard decision of x
    bool is_valid_codeword = false;
    int iterations = 0;
    Termination termination = Termination::max_iters;
    double wall_time = 0.0;  // seconds
    double objective = 0.0;  // gamma . x at exit (relaxed x)
    Eigen::VectorXd x;       // relaxed solution at exit
};

/// Threshold at 1/2; exact ties decide 0.
BinaryWord round_to_word(const Eigen::Ref<const Eigen::VectorXd>& x);

/// Throw std::invalid_argument on out-of-range parameters. The penalized check
/// needs the code: strict convexity requires mu * min_i |N(i)| > 2 * alpha.
void validate(const L2BoxParams& p);
void validate(const PenalizedParams& p, const ParityCheckMatrix& h);

/// Center start: x = 1/2, y = sphere fallback of the center, z_j = projection
/// of the gathered half-vector, duals zero.
AdmmState l2box_init(const ParityCheckMatrix& h);

/// x_i = clamp( (sum_{j in N(i)} (mu1 z_j^(i) - lambda1_j^(i)) - gamma_i
///               - lambda2_i + mu2 y_i) / (mu1 |N(i)| + mu2) ).
void l2box_x_update(AdmmState& s, const Eigen::Ref<const Eigen::VectorXd>& gamma,
                    const L2BoxParams& p, const ParityCheckMatrix& h);

/// y = projection onto the half-radius sphere along the direction
/// mu2 (x - 1/2) + lambda2 (invariant to positive rescaling of the direction).
void l2box_y_update(AdmmState& s, const L2BoxParams& p);

/// z_j = Pi_PP( P_j x + lambda1_j / mu1 ) for every check j.
void l2box_z_update(AdmmState& s, const L2BoxParams& p, const ParityCheckMatrix& h);

/// lambda1_j += mu1 (P_j x - z_j); lambda2 += mu2 (x - y). Also refreshes the
/// primal residuals from the same differences.
void l2box_dual_update(AdmmState& s, const L2BoxParams& p, const ParityCheckMatrix& h);

/// Called once per completed iteration (after the dual step, residuals fresh).
using IterationCallback = std::function<void(const AdmmState&)>;

/// l2-box ADMM decoding: x -> y -> z -> duals per iteration until both primal
/// residuals drop below epsilon or max_iters is hit. Deterministic.
DecodeResult l2box_decode(const ParityCheckMatrix& h,
                          const Eigen::Ref<const Eigen::VectorXd>& gamma,
                          const L2BoxParams& params = {},
                          const std::optional<AdmmState>& init = std::nullopt,
                          const IterationCallback& on_iteration = {});

/// ADMM on the penalized LP relaxation (objective gamma.x - alpha ||x-1/2||^2,
/// no sphere block): x_i = clamp( (d_i - gamma_i - alpha) / (mu |N(i)| - 2 alpha) )
/// with d_i as in the l2-box x-update; z and dual steps identical in form;
/// stops on the parity-polytope residual alone. Requires
/// mu * min_i |N(i)| > 2 alpha (strict convexity of the x-subproblem).
DecodeResult penalized_decode(const ParityCheckMatrix& h,
                              const Eigen::Ref<const Eigen::VectorXd>& gamma,
                              const PenalizedParams& params = {},
                              const IterationCallback& on_iteration = {});

/// Trace callback writing "iteration,residual_pp,residual_box,objective" CSV
/// rows (header emitted immediately). The stream must outlive the callback.
IterationCallback make_csv_trace(std::ostream& os, Eigen::VectorXd gamma);

}  // namespace lpbox
