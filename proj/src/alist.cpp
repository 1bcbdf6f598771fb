#include "lpbox/alist.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace lpbox {

namespace {

class IntReader {
public:
    explicit IntReader(std::string_view text) : text_(text) {}

    // Reads the next whitespace-separated decimal integer. `what` names the
    // token for the error message.
    long long next(const char* what) {
        skip_ws();
        if (pos_ >= text_.size())
            throw AlistParseError(line_, std::string("expected ") + what + ", got end of input");
        const int tok_line = line_;
        bool neg = false;
        std::size_t p = pos_;
        if (text_[p] == '-' || text_[p] == '+') {
            neg = text_[p] == '-';
            ++p;
        }
        if (p >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[p])))
            throw AlistParseError(tok_line, std::string("expected ") + what);
        long long v = 0;
        while (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
            v = v * 10 + (text_[p] - '0');
            if (v > (1LL << 40)) throw AlistParseError(tok_line, "integer too large");
            ++p;
        }
        if (p < text_.size() && !std::isspace(static_cast<unsigned char>(text_[p])))
            throw AlistParseError(tok_line, std::string("malformed integer for ") + what);
        pos_ = p;
        last_line_ = tok_line;
        return neg ? -v : v;
    }

    bool at_end() {
        skip_ws();
        return pos_ >= text_.size();
    }

    int line() const { return line_; }
    int last_line() const { return last_line_; }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            if (text_[pos_] == '\n') ++line_;
            ++pos_;
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int last_line_ = 1;
};

}  // namespace

ParityCheckMatrix parse_alist(std::string_view text) {
    IntReader in(text);

    const long long n = in.next("N");
    const long long m = in.next("M");
    if (n < 1 || m < 1) throw AlistParseError(in.last_line(), "malformed header: N and M must be positive");
    const long long max_col = in.next("max column degree");
    const long long max_row = in.next("max row degree");
    if (max_col < 0 || max_row < 1 || max_col > m || max_row > n)
        throw AlistParseError(in.last_line(), "malformed header: bad maximum degrees");

    std::vector<int> col_deg(static_cast<std::size_t>(n));
    for (long long i = 0; i < n; ++i) {
        const long long d = in.next("column degree");
        if (d < 0 || d > max_col)
            throw AlistParseError(in.last_line(), "column degree out of range");
        col_deg[static_cast<std::size_t>(i)] = static_cast<int>(d);
    }
    std::vector<int> row_deg(static_cast<std::size_t>(m));
    for (long long j = 0; j < m; ++j) {
        const long long d = in.next("row degree");
        if (d < 1 || d > max_row)
            throw AlistParseError(in.last_line(), "row degree out of range (degree-0 checks are rejected)");
        row_deg[static_cast<std::size_t>(j)] = static_cast<int>(d);
    }

    // Neighbor block helper: `count` lists padded to `width`, entries 1-based
    // in [1, limit]; zeros are padding.
    auto read_block = [&](long long count, long long width, const std::vector<int>& degrees,
                          long long limit, const char* what) {
        std::vector<std::vector<int>> lists(static_cast<std::size_t>(count));
        for (long long a = 0; a < count; ++a) {
            auto& lst = lists[static_cast<std::size_t>(a)];
            for (long long p = 0; p < width; ++p) {
                const long long v = in.next(what);
                if (v == 0) continue;  // padding
                if (v < 0 || v > limit)
                    throw AlistParseError(in.last_line(), std::string(what) + " index out of range");
                lst.push_back(static_cast<int>(v - 1));
            }
            std::vector<int> sorted = lst;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                throw AlistParseError(in.last_line(), std::string("duplicate ") + what + " index");
            if (static_cast<int>(lst.size()) != degrees[static_cast<std::size_t>(a)])
                throw AlistParseError(in.last_line(),
                                      std::string("degree/neighbor-list mismatch in ") + what + " list");
        }
        return lists;
    };

    auto cols = read_block(n, max_col, col_deg, m, "check");
    auto rows = read_block(m, max_row, row_deg, n, "variable");
    const int tail_line = in.last_line();
    if (!in.at_end()) throw AlistParseError(in.line(), "trailing data after neighbor lists");

    auto h = ParityCheckMatrix::from_rows(static_cast<int>(n), std::move(rows));
    // The file stores the adjacency twice; the two copies must agree.
    for (int i = 0; i < h.n_vars(); ++i) {
        auto got = h.var_checks(i);
        auto want = cols[static_cast<std::size_t>(i)];
        std::sort(want.begin(), want.end());
        if (got != want)
            throw AlistParseError(tail_line,
                                  "degree/neighbor-list mismatch: variable " + std::to_string(i + 1) +
                                      " disagrees between column and row lists");
    }
    return h;
}

std::string emit_alist(const ParityCheckMatrix& h) {
    const int max_col = h.max_var_degree();
    const int max_row = h.max_check_degree();
    std::ostringstream out;
    out << h.n_vars() << ' ' << h.n_checks() << '\n';
    out << max_col << ' ' << max_row << '\n';
    for (int i = 0; i < h.n_vars(); ++i) out << h.var_degree(i) << (i + 1 < h.n_vars() ? ' ' : '\n');
    for (int j = 0; j < h.n_checks(); ++j) out << h.check_degree(j) << (j + 1 < h.n_checks() ? ' ' : '\n');
    auto write_padded = [&](const std::vector<int>& lst, int width) {
        for (int p = 0; p < width; ++p) {
            if (p) out << ' ';
            out << (p < static_cast<int>(lst.size()) ? lst[p] + 1 : 0);
        }
        out << '\n';
    };
    for (int i = 0; i < h.n_vars(); ++i) write_padded(h.var_checks(i), max_col);
    for (int j = 0; j < h.n_checks(); ++j) write_padded(h.check_vars(j), max_row);
    return out.str();
}

ParityCheckMatrix load_alist_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_alist(ss.str());
}

void save_alist_file(const ParityCheckMatrix& h, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << emit_alist(h);
    if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace lpbox
