#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "lpbox/gf2.hpp"

namespace lpbox {

/// Parse failure; `line` is 1-based and already part of what().
struct AlistParseError : std::runtime_error {
    int line;
    AlistParseError(int line_, const std::string& msg)
        : std::runtime_error("alist line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

// alist layout: "N M", "max_col_degree max_row_degree", N column degrees,
// M row degrees, then N neighbor lists (1-based check indices, zero-padded to
// max_col_degree) and M neighbor lists (1-based variable indices, zero-padded
// to max_row_degree). Tokens are whitespace-separated; padding zeros ignored.
ParityCheckMatrix parse_alist(std::string_view text);
std::string emit_alist(const ParityCheckMatrix& h);

ParityCheckMatrix load_alist_file(const std::string& path);
void save_alist_file(const ParityCheckMatrix& h, const std::string& path);

}  // namespace lpbox
