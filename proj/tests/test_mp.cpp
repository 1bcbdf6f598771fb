#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "lpbox/channel.hpp"
#include "lpbox/message_passing.hpp"
#include "lpbox/rng.hpp"

using namespace lpbox;

namespace {

Eigen::VectorXd kernel(std::initializer_list<double> in, MpVariant v, double norm = 0.75) {
    Eigen::VectorXd msgs(static_cast<Eigen::Index>(in.size()));
    Eigen::Index i = 0;
    for (double m : in) msgs[i++] = m;
    Eigen::VectorXd out(msgs.size());
    check_node_update(msgs, v, norm, out);
    return out;
}

const auto kSingleCheck = ParityCheckMatrix::from_dense({{1, 1, 1}});

}  // namespace

TEST_CASE("tanh-rule kernel matches hand values") {
    // degree 3, inputs (4, 4, x): extrinsic to the third edge ignores x
    Eigen::VectorXd out = kernel({4.0, 4.0, -1.0}, MpVariant::sum_product);
    CHECK(out[2] == doctest::Approx(3.307188225812951).epsilon(1e-12));
    out = kernel({2.0, -3.0, 0.5}, MpVariant::sum_product);
    CHECK(out[2] == doctest::Approx(-1.693453660970895).epsilon(1e-12));
    // degree 2 passes messages through unchanged
    out = kernel({1.25, -0.75}, MpVariant::sum_product);
    CHECK(out[0] == doctest::Approx(-0.75).epsilon(1e-12));
    CHECK(out[1] == doctest::Approx(1.25).epsilon(1e-12));
    // a zero input erases certainty on every other edge
    out = kernel({0.0, 5.0, -7.0}, MpVariant::sum_product);
    CHECK(out[1] == 0.0);
    CHECK(out[2] == 0.0);
    CHECK(out[0] != 0.0);
}

TEST_CASE("min-sum kernel takes the extrinsic minimum with the sign product") {
    Eigen::VectorXd out = kernel({4.0, -2.0, 1.0, -3.0}, MpVariant::min_sum);
    CHECK(out[0] == doctest::Approx(1.0));    // others -2,1,-3: sign +, min 1
    CHECK(out[1] == doctest::Approx(-1.0));   // others 4,1,-3: sign -, min 1
    CHECK(out[2] == doctest::Approx(2.0));    // others 4,-2,-3: sign +, min 2
    CHECK(out[3] == doctest::Approx(-1.0));   // others 4,-2,1: sign -, min 1
}

TEST_CASE("normalized kernel is exactly the scaled min-sum") {
    Eigen::VectorXd raw = kernel({4.0, -2.0, 1.0, -3.0}, MpVariant::min_sum);
    Eigen::VectorXd scaled = kernel({4.0, -2.0, 1.0, -3.0}, MpVariant::normalized_min_sum, 0.75);
    for (int i = 0; i < 4; ++i) CHECK(scaled[i] == 0.75 * raw[i]);
    Eigen::VectorXd unit = kernel({4.0, -2.0, 1.0, -3.0}, MpVariant::normalized_min_sum, 1.0);
    CHECK(unit == raw);
}

TEST_CASE("kernels agree on message signs") {
    auto rng = make_rng(13);
    std::normal_distribution<double> n01(0.0, 2.0);
    for (int rep = 0; rep < 200; ++rep) {
        const int d = 2 + rep % 5;
        Eigen::VectorXd in(d), a(d), b(d);
        for (int i = 0; i < d; ++i) in[i] = n01(rng);
        check_node_update(in, MpVariant::sum_product, 0.75, a);
        check_node_update(in, MpVariant::min_sum, 0.75, b);
        for (int i = 0; i < d; ++i) CHECK(a[i] * b[i] >= 0.0);
    }
}

TEST_CASE("decoding solves the single-check example in one sweep") {
    Eigen::VectorXd gamma(3);
    gamma << 4.0, 4.0, -1.0;
    for (auto v : {MpVariant::sum_product, MpVariant::min_sum, MpVariant::normalized_min_sum}) {
        MpParams p;
        p.variant = v;
        auto r = mp_decode(kSingleCheck, gamma, p);
        CHECK(r.word == BinaryWord{0, 0, 0});
        CHECK(r.is_valid_codeword);
        CHECK(r.iterations == 1);
        CHECK(r.termination == Termination::early_codeword);
        CHECK(r.objective == 0.0);  // gamma . word with the all-zero word
    }
}

TEST_CASE("an unsatisfiable fixed point runs to the iteration cap") {
    Eigen::VectorXd gamma(3);
    gamma << -2.0, -1.0, -1.0;  // hard decision (1,0,0) every sweep, never a codeword
    MpParams p;
    p.variant = MpVariant::min_sum;
    p.max_iters = 25;
    auto r = mp_decode(kSingleCheck, gamma, p);
    CHECK_FALSE(r.is_valid_codeword);
    CHECK(r.iterations == 25);
    CHECK(r.termination == Termination::max_iters);
}

TEST_CASE("global sign flip complements the decision on even-degree checks") {
    // all checks have degree 6, so the extrinsic kernel is odd under negation
    // and the all-ones word is a codeword
    auto h = random_regular_code(48, 3, 6, 21);
    auto rng = make_rng(55);
    std::normal_distribution<double> n01(0.0, 1.5);
    for (auto v : {MpVariant::sum_product, MpVariant::min_sum, MpVariant::normalized_min_sum}) {
        for (int rep = 0; rep < 5; ++rep) {
            Eigen::VectorXd gamma(48);
            for (int i = 0; i < 48; ++i) {
                do gamma[i] = n01(rng); while (gamma[i] == 0.0);
            }
            MpParams p;
            p.variant = v;
            auto pos = mp_decode(h, gamma, p);
            auto neg = mp_decode(h, -gamma, p);
            CHECK(pos.iterations == neg.iterations);
            for (int i = 0; i < 48; ++i) CHECK(pos.word[i] + neg.word[i] == 1);
        }
    }
}

TEST_CASE("saturated inputs stay finite through the kernel and the decoder") {
    const double inf = std::numeric_limits<double>::infinity();
    Eigen::VectorXd out = kernel({inf, inf, 1.0}, MpVariant::sum_product);
    CHECK(out[2] == inf);  // kernels may saturate; the decoder clips
    CHECK(out[0] == doctest::Approx(1.0));

    Eigen::VectorXd agree(3);
    agree << 1e12, 1e12, 1e12;
    auto r = mp_decode(kSingleCheck, agree, {});
    CHECK(r.is_valid_codeword);
    CHECK(r.word == BinaryWord{0, 0, 0});

    Eigen::VectorXd conflict(3);
    conflict << 1e12, 5.0, -1e12;  // strong contradictory evidence
    for (auto v : {MpVariant::sum_product, MpVariant::min_sum}) {
        MpParams p;
        p.variant = v;
        p.max_iters = 20;
        auto c = mp_decode(kSingleCheck, conflict, p);
        CHECK(c.iterations >= 1);
        for (int i = 0; i < 3; ++i) CHECK((c.word[i] == 0 || c.word[i] == 1));
    }
}

TEST_CASE("decoding recovers a clean transmission on a real code") {
    auto h = random_regular_code(96, 3, 6, 28);
    auto p = ChannelParams::from_snr(7.0, 0.5);
    auto rng = make_rng(3);
    Eigen::VectorXd gamma = llr_awgn(add_awgn(Eigen::VectorXd::Ones(96), p, rng), p);
    for (auto v : {MpVariant::sum_product, MpVariant::min_sum, MpVariant::normalized_min_sum}) {
        MpParams mp;
        mp.variant = v;
        auto r = mp_decode(h, gamma, mp);
        CHECK(r.is_valid_codeword);
        CHECK(r.word == BinaryWord(96, 0));
    }
}

TEST_CASE("parameter validation rejects out-of-range values") {
    MpParams p;
    p.max_iters = 0;
    CHECK_THROWS_AS(validate(p), std::invalid_argument);
    p = {};
    p.normalization = 0.0;
    CHECK_THROWS_AS(validate(p), std::invalid_argument);
    p = {};
    p.normalization = 1.5;
    CHECK_THROWS_AS(validate(p), std::invalid_argument);
    p = {};
    p.llr_clip = 0.0;
    CHECK_THROWS_AS(validate(p), std::invalid_argument);
    p = {};
    CHECK_NOTHROW(validate(p));

    Eigen::VectorXd wrong(2);
    wrong << 1.0, 2.0;
    CHECK_THROWS_AS(mp_decode(kSingleCheck, wrong), std::invalid_argument);
}
