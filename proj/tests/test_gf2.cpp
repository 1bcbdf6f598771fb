#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "lpbox/alist.hpp"
#include "lpbox/gf2.hpp"
#include "lpbox/rng.hpp"

using namespace lpbox;

namespace {

const std::vector<std::vector<int>> kHamming74 = {
    {1, 0, 1, 0, 1, 0, 1}, {0, 1, 1, 0, 0, 1, 1}, {0, 0, 0, 1, 1, 1, 1}};

BinaryWord word(std::initializer_list<int> bits) {
    BinaryWord w;
    for (int b : bits) w.push_back(static_cast<std::uint8_t>(b));
    return w;
}

}  // namespace

TEST_CASE("parity-check construction normalizes and validates") {
    auto h = ParityCheckMatrix::from_rows(4, {{3, 1}, {0, 2, 3}});
    CHECK(h.n_vars() == 4);
    CHECK(h.n_checks() == 2);
    CHECK(h.check_vars(0) == std::vector<int>{1, 3});
    CHECK(h.var_checks(3) == std::vector<int>{0, 1});
    CHECK(h.check_degree(1) == 3);
    CHECK(h.var_degree(1) == 1);
    CHECK(h.n_edges() == 5);
    CHECK(h.min_var_degree() == 1);

    CHECK_THROWS_AS(ParityCheckMatrix::from_rows(4, {{}}), std::invalid_argument);
    CHECK_THROWS_AS(ParityCheckMatrix::from_rows(4, {{4}}), std::invalid_argument);
    CHECK_THROWS_AS(ParityCheckMatrix::from_rows(4, {{-1}}), std::invalid_argument);
    CHECK_THROWS_AS(ParityCheckMatrix::from_rows(4, {{1, 1}}), std::invalid_argument);
}

TEST_CASE("unchecked variables are reported") {
    auto h = ParityCheckMatrix::from_rows(5, {{0, 1}, {1, 2}});
    CHECK(h.unchecked_vars() == std::vector<int>{3, 4});
}

TEST_CASE("syndrome and codeword membership") {
    auto h = ParityCheckMatrix::from_dense(kHamming74);
    CHECK(is_codeword(h, word({0, 0, 0, 0, 0, 0, 0})));
    CHECK(is_codeword(h, word({1, 1, 1, 0, 0, 0, 0})));
    CHECK_FALSE(is_codeword(h, word({1, 0, 0, 0, 0, 0, 0})));
    auto s = syndrome(h, word({1, 0, 0, 0, 0, 0, 0}));
    CHECK(s == std::vector<std::uint8_t>{1, 0, 0});
    CHECK_THROWS_AS(syndrome(h, word({1, 0})), std::invalid_argument);
}

TEST_CASE("rank and generator dimensions agree and the basis spans codewords") {
    auto rng = make_rng(42);
    for (int rep = 0; rep < 30; ++rep) {
        auto h = random_sparse_code(12, 6, 0.3, 1000 + rep);
        const int r = gf2_rank(h);
        auto g = derive_generator(h);
        CHECK(g.k() == 12 - r);
        for (const auto& row : g.basis) CHECK(is_codeword(h, row));
        // random combinations stay codewords
        std::uniform_int_distribution<int> bit(0, 1);
        for (int t = 0; t < 10; ++t) {
            std::vector<std::uint8_t> msg(g.k());
            for (auto& b : msg) b = static_cast<std::uint8_t>(bit(rng));
            CHECK(is_codeword(h, encode(g, msg)));
        }
    }
}

TEST_CASE("generator basis words are linearly independent") {
    auto h = ParityCheckMatrix::from_dense(kHamming74);
    auto g = derive_generator(h);
    REQUIRE(g.k() == 4);
    // all 16 encodings distinct
    std::set<BinaryWord> words;
    for (int m = 0; m < 16; ++m) {
        std::vector<std::uint8_t> msg = {static_cast<std::uint8_t>(m & 1),
                                         static_cast<std::uint8_t>((m >> 1) & 1),
                                         static_cast<std::uint8_t>((m >> 2) & 1),
                                         static_cast<std::uint8_t>((m >> 3) & 1)};
        words.insert(encode(g, msg));
    }
    CHECK(words.size() == 16);
}

TEST_CASE("brute-force ML picks the cost-minimizing codeword") {
    auto h = ParityCheckMatrix::from_dense({{1, 1, 1}});
    auto g = derive_generator(h);
    REQUIRE(g.k() == 2);

    Eigen::VectorXd gamma(3);
    gamma << -1.0, -2.0, 3.0;  // costs: 000->0, 110->-3, 101->2, 011->1
    CHECK(ml_decode_bruteforce(g, gamma) == word({1, 1, 0}));

    gamma << 0.0, 0.0, 0.0;  // full tie: lexicographically smallest
    CHECK(ml_decode_bruteforce(g, gamma) == word({0, 0, 0}));

    gamma << 1.0, 1.0, 1.0;
    CHECK(ml_decode_bruteforce(g, gamma) == word({0, 0, 0}));
}

TEST_CASE("brute-force ML beats every other codeword on random instances") {
    auto rng = make_rng(77);
    std::normal_distribution<double> n01(0.0, 1.0);
    auto h = ParityCheckMatrix::from_dense(kHamming74);
    auto g = derive_generator(h);
    for (int rep = 0; rep < 50; ++rep) {
        Eigen::VectorXd gamma(7);
        for (int i = 0; i < 7; ++i) gamma[i] = n01(rng);
        auto best = ml_decode_bruteforce(g, gamma);
        double best_cost = 0.0;
        for (int i = 0; i < 7; ++i) best_cost += gamma[i] * best[i];
        for (int m = 0; m < 16; ++m) {
            std::vector<std::uint8_t> msg = {static_cast<std::uint8_t>(m & 1),
                                             static_cast<std::uint8_t>((m >> 1) & 1),
                                             static_cast<std::uint8_t>((m >> 2) & 1),
                                             static_cast<std::uint8_t>((m >> 3) & 1)};
            auto other = encode(g, msg);
            double cost = 0.0;
            for (int i = 0; i < 7; ++i) cost += gamma[i] * other[i];
            CHECK(best_cost <= cost + 1e-12);
        }
    }
}

TEST_CASE("random regular codes have the advertised degrees and are seed-stable") {
    auto h = random_regular_code(24, 3, 6, 9);
    CHECK(h.n_vars() == 24);
    CHECK(h.n_checks() == 12);
    for (int i = 0; i < h.n_vars(); ++i) CHECK(h.var_degree(i) == 3);
    for (int j = 0; j < h.n_checks(); ++j) CHECK(h.check_degree(j) == 6);
    CHECK(h == random_regular_code(24, 3, 6, 9));
    CHECK_FALSE(h == random_regular_code(24, 3, 6, 10));
}

TEST_CASE("alist round trip preserves the matrix") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        auto h = random_regular_code(20, 2, 4, seed);
        auto back = parse_alist(emit_alist(h));
        CHECK(back == h);
    }
    auto sparse = random_sparse_code(15, 7, 0.25, 5);
    CHECK(parse_alist(emit_alist(sparse)) == sparse);
}

TEST_CASE("alist parser accepts the documented layout") {
    const char* text =
        "3 1\n"
        "1 3\n"
        "1 1 1\n"
        "3\n"
        "1\n1\n1\n"
        "1 2 3\n";
    auto h = parse_alist(text);
    CHECK(h.n_vars() == 3);
    CHECK(h.n_checks() == 1);
    CHECK(h.check_vars(0) == std::vector<int>{0, 1, 2});
}

TEST_CASE("alist parser rejects malformed input with a line number") {
    CHECK_THROWS_AS(parse_alist(""), AlistParseError);
    CHECK_THROWS_AS(parse_alist("0 1\n1 1\n"), AlistParseError);
    CHECK_THROWS_AS(parse_alist("3 1\n1 3\n1 1 1\n3\n1\n1\n1\n1 2 9\n"), AlistParseError);
    CHECK_THROWS_AS(parse_alist("3 1\n1 3\n1 1 1\n3\n1\n1\n1\n"), AlistParseError);  // truncated
    CHECK_THROWS_AS(parse_alist("3 1\n1 3\n1 1 1\n3\n1\n1\n1\nx y z\n"), AlistParseError);
    try {
        parse_alist("not an alist");
        CHECK(false);
    } catch (const AlistParseError& e) {
        CHECK(e.line >= 1);
        CHECK(std::string(e.what()).find("line") != std::string::npos);
    }
}

TEST_CASE("shipped codes load with the expected shapes") {
    auto small = load_alist_file(std::string(LPBOX_CODES_DIR) + "/single_check_n3.alist");
    CHECK(small.n_vars() == 3);
    CHECK(small.n_checks() == 1);
    CHECK(gf2_rank(small) == 1);

    auto big = load_alist_file(std::string(LPBOX_CODES_DIR) + "/regular_n96_k48.alist");
    CHECK(big.n_vars() == 96);
    CHECK(big.n_checks() == 48);
    CHECK(gf2_rank(big) == 48);
    for (int i = 0; i < big.n_vars(); ++i) CHECK(big.var_degree(i) == 3);
    for (int j = 0; j < big.n_checks(); ++j) CHECK(big.check_degree(j) == 6);
}

TEST_CASE("missing alist file raises an I/O error") {
    CHECK_THROWS(load_alist_file("/nonexistent/nowhere.alist"));
}
