#pragma once

#include <Eigen/Dense>

#include "lpbox/gf2.hpp"
#include "lpbox/rng.hpp"

namespace lpbox {

/// BPSK over AWGN. SNR is Eb/N0 in dB, so sigma^2 = 1 / (2 * rate * 10^(snr/10)).
struct ChannelParams {
    double snr_db = 0.0;
    double rate = 0.5;
    double sigma = 1.0;

    static ChannelParams from_snr(double snr_db, double rate);
};

double snr_to_sigma(double snr_db, double rate);

// bit 0 -> +1.0, bit 1 -> -1.0
Eigen::VectorXd modulate_bpsk(const BinaryWord& w);

// signal + iid Gaussian(0, sigma^2) noise; deterministic given the generator state.
Eigen::VectorXd add_awgn(const Eigen::Ref<const Eigen::VectorXd>& signal,
                         const ChannelParams& params, Rng& rng);

// gamma_i = log P(y_i|0) / P(y_i|1) = 2 y_i / sigma^2 for this mapping.
// LLRs are not clipped here.
Eigen::VectorXd llr_awgn(const Eigen::Ref<const Eigen::VectorXd>& received,
                         const ChannelParams& params);

}  // namespace lpbox
