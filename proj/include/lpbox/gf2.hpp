#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "lpbox/rng.hpp"

namespace lpbox {

// Bits are stored as one byte per position, values 0/1.
using BinaryWord = std::vector<std::uint8_t>;

/// Sparse M x N binary parity-check matrix stored as Tanner-graph adjacency:
/// per-check variable lists N(j) and per-variable check lists N(i), both
/// sorted. Immutable after construction.
class ParityCheckMatrix {
public:
    ParityCheckMatrix() = default;  // the empty 0 x 0 matrix

    // `rows[j]` lists the variables of check j (any order, 0-based).
    // Rejects empty checks, out-of-range and duplicate indices.
    static ParityCheckMatrix from_rows(int n_vars, std::vector<std::vector<int>> rows);

    // Convenience for tests: dense 0/1 row-major description.
    static ParityCheckMatrix from_dense(const std::vector<std::vector<int>>& h);

    int n_vars() const { return n_vars_; }
    int n_checks() const { return static_cast<int>(rows_.size()); }

    // N(j): sorted variable indices of check j. This is the index-gather form
    // of the check's selector matrix; the dense form is never materialized.
    const std::vector<int>& check_vars(int j) const { return rows_[j]; }
    // N(i): sorted check indices containing variable i.
    const std::vector<int>& var_checks(int i) const { return cols_[i]; }

    int check_degree(int j) const { return static_cast<int>(rows_[j].size()); }
    int var_degree(int i) const { return static_cast<int>(cols_[i].size()); }
    int max_check_degree() const;
    int max_var_degree() const;
    int min_var_degree() const;
    long long n_edges() const;

    // Degree-0 columns. Legal (such bits are unconstrained) but worth a warning.
    std::vector<int> unchecked_vars() const;

    bool operator==(const ParityCheckMatrix&) const = default;

private:
    int n_vars_ = 0;
    std::vector<std::vector<int>> rows_;
    std::vector<std::vector<int>> cols_;
};

// Component j is the XOR of w over N(j). Throws on length mismatch.
std::vector<std::uint8_t> syndrome(const ParityCheckMatrix& h, const BinaryWord& w);
bool is_codeword(const ParityCheckMatrix& h, const BinaryWord& w);

/// Basis of the GF(2) null space of H; k = N - rank(H).
struct GeneratorMatrix {
    int n = 0;
    std::vector<BinaryWord> basis;
    int k() const { return static_cast<int>(basis.size()); }
};

int gf2_rank(const ParityCheckMatrix& h);
GeneratorMatrix derive_generator(const ParityCheckMatrix& h);

// XOR combination of basis words selected by msg (length k). Linear in msg.
BinaryWord encode(const GeneratorMatrix& g, const std::vector<std::uint8_t>& msg);

// argmin over all 2^k codewords of gamma^T x; ties broken toward the
// lexicographically smallest word. Enumeration oracle, guarded to k <= 24.
BinaryWord ml_decode_bruteforce(const GeneratorMatrix& g,
                                const Eigen::Ref<const Eigen::VectorXd>& gamma);

// Random (var_degree, check_degree)-regular Tanner graph via socket pairing
// with duplicate repair. Deterministic for a given seed.
ParityCheckMatrix random_regular_code(int n_vars, int var_degree, int check_degree,
                                      std::uint64_t seed);

// Random sparse matrix with nonempty rows; duplicate-free by construction.
// Degree-0 columns may occur.
ParityCheckMatrix random_sparse_code(int n_vars, int n_checks, double density,
                                     std::uint64_t seed);

inline Eigen::VectorXd gather(const Eigen::Ref<const Eigen::VectorXd>& x,
                              const std::vector<int>& idx) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t p = 0; p < idx.size(); ++p) out[static_cast<Eigen::Index>(p)] = x[idx[p]];
    return out;
}

}  // namespace lpbox
