#include "lpbox/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace lpbox {

double snr_to_sigma(double snr_db, double rate) {
    if (!(rate > 0.0 && rate <= 1.0)) throw std::invalid_argument("rate must be in (0,1]");
    return std::sqrt(1.0 / (2.0 * rate * std::pow(10.0, snr_db / 10.0)));
}

ChannelParams ChannelParams::from_snr(double snr_db, double rate) {
    return ChannelParams{snr_db, rate, snr_to_sigma(snr_db, rate)};
}

Eigen::VectorXd modulate_bpsk(const BinaryWord& w) {
    Eigen::VectorXd s(static_cast<Eigen::Index>(w.size()));
    for (std::size_t i = 0; i < w.size(); ++i) s[static_cast<Eigen::Index>(i)] = w[i] ? -1.0 : 1.0;
    return s;
}

Eigen::VectorXd add_awgn(const Eigen::Ref<const Eigen::VectorXd>& signal,
                         const ChannelParams& params, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd y = signal;
    for (Eigen::Index i = 0; i < y.size(); ++i) y[i] += params.sigma * gauss(rng);
    return y;
}

Eigen::VectorXd llr_awgn(const Eigen::Ref<const Eigen::VectorXd>& received,
                         const ChannelParams& params) {
    if (!(params.sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    return received * (2.0 / (params.sigma * params.sigma));
}

}  // namespace lpbox
