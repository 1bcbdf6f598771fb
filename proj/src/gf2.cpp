#include "lpbox/gf2.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace lpbox {

ParityCheckMatrix ParityCheckMatrix::from_rows(int n_vars, std::vector<std::vector<int>> rows) {
    if (n_vars < 1) throw std::invalid_argument("parity check matrix needs at least one variable");
    if (rows.empty()) throw std::invalid_argument("parity check matrix needs at least one check");

    ParityCheckMatrix h;
    h.n_vars_ = n_vars;
    h.cols_.assign(n_vars, {});
    for (std::size_t j = 0; j < rows.size(); ++j) {
        auto& r = rows[j];
        if (r.empty())
            throw std::invalid_argument("check " + std::to_string(j) + " has degree 0");
        std::sort(r.begin(), r.end());
        for (std::size_t p = 0; p < r.size(); ++p) {
            if (r[p] < 0 || r[p] >= n_vars)
                throw std::invalid_argument("check " + std::to_string(j) +
                                            ": variable index out of range");
            if (p > 0 && r[p] == r[p - 1])
                throw std::invalid_argument("check " + std::to_string(j) +
                                            ": duplicate variable index");
            h.cols_[r[p]].push_back(static_cast<int>(j));
        }
    }
    h.rows_ = std::move(rows);
    return h;
}

ParityCheckMatrix ParityCheckMatrix::from_dense(const std::vector<std::vector<int>>& h) {
    if (h.empty() || h[0].empty()) throw std::invalid_argument("empty dense matrix");
    const int n = static_cast<int>(h[0].size());
    std::vector<std::vector<int>> rows(h.size());
    for (std::size_t j = 0; j < h.size(); ++j) {
        if (static_cast<int>(h[j].size()) != n)
            throw std::invalid_argument("ragged dense matrix");
        for (int i = 0; i < n; ++i)
            if (h[j][i]) rows[j].push_back(i);
    }
    return from_rows(n, std::move(rows));
}

int ParityCheckMatrix::max_check_degree() const {
    int d = 0;
    for (const auto& r : rows_) d = std::max(d, static_cast<int>(r.size()));
    return d;
}

int ParityCheckMatrix::max_var_degree() const {
    int d = 0;
    for (const auto& c : cols_) d = std::max(d, static_cast<int>(c.size()));
    return d;
}

int ParityCheckMatrix::min_var_degree() const {
    int d = n_checks() + 1;
    for (const auto& c : cols_) d = std::min(d, static_cast<int>(c.size()));
    return d;
}

long long ParityCheckMatrix::n_edges() const {
    long long e = 0;
    for (const auto& r : rows_) e += static_cast<long long>(r.size());
    return e;
}

std::vector<int> ParityCheckMatrix::unchecked_vars() const {
    std::vector<int> out;
    for (int i = 0; i < n_vars_; ++i)
        if (cols_[i].empty()) out.push_back(i);
    return out;
}

std::vector<std::uint8_t> syndrome(const ParityCheckMatrix& h, const BinaryWord& w) {
    if (static_cast<int>(w.size()) != h.n_vars())
        throw std::invalid_argument("word length does not match code length");
    std::vector<std::uint8_t> s(h.n_checks(), 0);
    for (int j = 0; j < h.n_checks(); ++j) {
        std::uint8_t acc = 0;
        for (int i : h.check_vars(j)) acc ^= (w[i] & 1u);
        s[j] = acc;
    }
    return s;
}

bool is_codeword(const ParityCheckMatrix& h, const BinaryWord& w) {
    const auto s = syndrome(h, w);
    return std::all_of(s.begin(), s.end(), [](std::uint8_t b) { return b == 0; });
}

namespace {

// Dense bit-packed GF(2) matrix, rows of 64-bit words. Enough for the code
// sizes handled here; sparsity is not worth the complexity.
class Gf2Dense {
public:
    Gf2Dense(int rows, int cols)
        : rows_(rows), cols_(cols), words_((cols + 63) / 64), bits_(static_cast<std::size_t>(rows) * words_, 0) {}

    void set(int r, int c) { bits_[static_cast<std::size_t>(r) * words_ + c / 64] |= (1ULL << (c % 64)); }
    bool get(int r, int c) const {
        return (bits_[static_cast<std::size_t>(r) * words_ + c / 64] >> (c % 64)) & 1ULL;
    }
    void xor_rows(int dst, int src) {
        auto* d = &bits_[static_cast<std::size_t>(dst) * words_];
        const auto* s = &bits_[static_cast<std::size_t>(src) * words_];
        for (int w = 0; w < words_; ++w) d[w] ^= s[w];
    }
    void swap_rows(int a, int b) {
        if (a == b) return;
        std::swap_ranges(bits_.begin() + static_cast<std::ptrdiff_t>(a) * words_,
                         bits_.begin() + static_cast<std::ptrdiff_t>(a + 1) * words_,
                         bits_.begin() + static_cast<std::ptrdiff_t>(b) * words_);
    }
    int rows() const { return rows_; }
    int cols() const { return cols_; }

private:
    int rows_, cols_, words_;
    std::vector<std::uint64_t> bits_;
};

struct Rref {
    Gf2Dense m;
    std::vector<int> pivot_cols;  // ascending; pivot_cols[r] is the pivot of row r
};

Rref reduced_row_echelon(const ParityCheckMatrix& h) {
    Gf2Dense m(h.n_checks(), h.n_vars());
    for (int j = 0; j < h.n_checks(); ++j)
        for (int i : h.check_vars(j)) m.set(j, i);

    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
        int pr = -1;
        for (int q = r; q < m.rows(); ++q)
            if (m.get(q, c)) { pr = q; break; }
        if (pr < 0) continue;
        m.swap_rows(r, pr);
        for (int q = 0; q < m.rows(); ++q)
            if (q != r && m.get(q, c)) m.xor_rows(q, r);
        pivots.push_back(c);
        ++r;
    }
    return {std::move(m), std::move(pivots)};
}

}  // namespace

int gf2_rank(const ParityCheckMatrix& h) {
    return static_cast<int>(reduced_row_echelon(h).pivot_cols.size());
}

GeneratorMatrix derive_generator(const ParityCheckMatrix& h) {
    const auto rref = reduced_row_echelon(h);
    const int n = h.n_vars();

    std::vector<char> is_pivot(n, 0);
    for (int c : rref.pivot_cols) is_pivot[c] = 1;

    GeneratorMatrix g;
    g.n = n;
    for (int f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        BinaryWord w(n, 0);
        w[f] = 1;
        for (std::size_t r = 0; r < rref.pivot_cols.size(); ++r)
            if (rref.m.get(static_cast<int>(r), f)) w[rref.pivot_cols[r]] = 1;
        g.basis.push_back(std::move(w));
    }
    return g;
}

BinaryWord encode(const GeneratorMatrix& g, const std::vector<std::uint8_t>& msg) {
    if (static_cast<int>(msg.size()) != g.k())
        throw std::invalid_argument("message length does not match k");
    BinaryWord w(g.n, 0);
    for (int t = 0; t < g.k(); ++t) {
        if (!(msg[t] & 1u)) continue;
        const auto& b = g.basis[t];
        for (int i = 0; i < g.n; ++i) w[i] ^= b[i];
    }
    return w;
}

BinaryWord ml_decode_bruteforce(const GeneratorMatrix& g,
                                const Eigen::Ref<const Eigen::VectorXd>& gamma) {
    if (g.k() > 24) throw std::invalid_argument("ml_decode_bruteforce: k > 24");
    if (gamma.size() != g.n) throw std::invalid_argument("llr length does not match code length");

    BinaryWord cur(g.n, 0);
    double obj = 0.0;
    BinaryWord best = cur;
    double best_obj = obj;

    const std::uint64_t total = 1ULL << g.k();
    std::uint64_t gray_prev = 0;
    for (std::uint64_t m = 1; m < total; ++m) {
        const std::uint64_t gray = m ^ (m >> 1);
        const std::uint64_t changed = gray ^ gray_prev;
        gray_prev = gray;
        const int t = std::countr_zero(changed);
        for (int i = 0; i < g.n; ++i) {
            if (!g.basis[t][i]) continue;
            obj += cur[i] ? -gamma[i] : gamma[i];
            cur[i] ^= 1u;
        }
        if (obj < best_obj || (obj == best_obj && cur < best)) {
            best_obj = obj;
            best = cur;
        }
    }
    return best;
}

ParityCheckMatrix random_regular_code(int n_vars, int var_degree, int check_degree,
                                      std::uint64_t seed) {
    if (n_vars < 1 || var_degree < 1 || check_degree < 1)
        throw std::invalid_argument("degrees and size must be positive");
    const long long edges = static_cast<long long>(n_vars) * var_degree;
    if (edges % check_degree != 0)
        throw std::invalid_argument("n_vars*var_degree must be divisible by check_degree");
    const int n_checks = static_cast<int>(edges / check_degree);

    Rng rng = make_rng(seed);
    std::vector<int> sockets(edges);
    for (long long e = 0; e < edges; ++e) sockets[e] = static_cast<int>(e / var_degree);
    std::shuffle(sockets.begin(), sockets.end(), rng);

    // Repair duplicate variables within a check by swapping with a random socket.
    auto find_dup = [&](int j) -> int {
        for (int a = 0; a < check_degree; ++a)
            for (int b = a + 1; b < check_degree; ++b)
                if (sockets[j * check_degree + a] == sockets[j * check_degree + b])
                    return j * check_degree + b;
        return -1;
    };
    for (int pass = 0; pass < 100000; ++pass) {
        bool clean = true;
        for (int j = 0; j < n_checks; ++j) {
            int p = find_dup(j);
            if (p < 0) continue;
            clean = false;
            const auto q = static_cast<long long>(rng() % static_cast<std::uint64_t>(edges));
            std::swap(sockets[p], sockets[q]);
        }
        if (clean) {
            std::vector<std::vector<int>> rows(n_checks);
            for (int j = 0; j < n_checks; ++j)
                rows[j].assign(sockets.begin() + static_cast<std::ptrdiff_t>(j) * check_degree,
                               sockets.begin() + static_cast<std::ptrdiff_t>(j + 1) * check_degree);
            return ParityCheckMatrix::from_rows(n_vars, std::move(rows));
        }
    }
    throw std::runtime_error("random_regular_code: repair did not converge");
}

ParityCheckMatrix random_sparse_code(int n_vars, int n_checks, double density,
                                     std::uint64_t seed) {
    if (n_vars < 1 || n_checks < 1) throw std::invalid_argument("size must be positive");
    if (!(density > 0.0 && density <= 1.0)) throw std::invalid_argument("density in (0,1]");

    Rng rng = make_rng(seed);
    const auto uniform = [&rng]() { return (rng() >> 11) * 0x1.0p-53; };
    std::vector<std::vector<int>> rows(n_checks);
    for (int j = 0; j < n_checks; ++j) {
        for (int i = 0; i < n_vars; ++i)
            if (uniform() < density) rows[j].push_back(i);
        if (rows[j].empty())
            rows[j].push_back(static_cast<int>(rng() % static_cast<std::uint64_t>(n_vars)));
    }
    return ParityCheckMatrix::from_rows(n_vars, std::move(rows));
}

}  // namespace lpbox
