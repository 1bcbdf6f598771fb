#pragma once

#include <Eigen/Dense>

#include "lpbox/admm.hpp"
#include "lpbox/gf2.hpp"

namespace lpbox {

enum class MpVariant { sum_product, min_sum, normalized_min_sum };

const char* to_string(MpVariant v);

struct MpParams {
    MpVariant variant = MpVariant::sum_product;
    int max_iters = 60;
    double normalization = 0.75;  // normalized_min_sum only
    double llr_clip = 30.0;       // all messages clipped to +-llr_clip
};

/// Throws std::invalid_argument on out-of-range parameters.
void validate(const MpParams& p);

/// Extrinsic check-to-variable kernel for one check: out[t] combines all
/// incoming messages except in[t]. sum_product uses the tanh rule, min_sum the
/// sign-product x min-magnitude rule, normalized_min_sum scales the latter by
/// `normalization` exactly. May return +-inf (degree-1 checks, saturated
/// inputs); callers clip.
void check_node_update(const Eigen::Ref<const Eigen::VectorXd>& in, MpVariant variant,
                       double normalization, Eigen::Ref<Eigen::VectorXd> out);

/// Flooding-schedule LLR-domain message passing with per-iteration hard
/// decision and syndrome early exit (termination=early_codeword). In the
/// result, x holds the hard decision as reals, so objective = gamma . word.
DecodeResult mp_decode(const ParityCheckMatrix& h, const Eigen::Ref<const Eigen::VectorXd>& gamma,
                       const MpParams& params = {});

}  // namespace lpbox
