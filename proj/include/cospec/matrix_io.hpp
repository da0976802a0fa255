#pragma once

// Exact fraction text: one matrix row per line, entries separated by
// whitespace, each entry an integer or "num/den" (e.g. "-3/5"). Lines starting
// with '#' are comments; a blank line ends a matrix.

#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "exact_linalg.hpp"

namespace cospec {

inline std::string format_rational(const Rational& x) { return x.get_str(); }

inline Rational parse_rational(std::string text) {
    // Accept the typographic minus sign U+2212 as well as ASCII '-'.
    for (auto pos = text.find("\xE2\x88\x92"); pos != std::string::npos; pos = text.find("\xE2\x88\x92"))
        text.replace(pos, 3, "-");
    if (text.empty()) throw ParseError("empty rational");
    const auto slash = text.find('/');
    Integer num, den = 1;
    const std::string a = text.substr(0, slash);
    if (a.empty() || num.set_str(a, 10) != 0) throw ParseError("bad rational '" + text + "'");
    if (slash != std::string::npos) {
        const std::string b = text.substr(slash + 1);
        if (b.empty() || b[0] == '-' || b[0] == '+' || den.set_str(b, 10) != 0)
            throw ParseError("bad rational '" + text + "'");
        if (den == 0) throw ParseError("zero denominator in '" + text + "'");
    }
    return make_rational(num, den);
}

inline std::string format_matrix(const RationalMatrix& m) {
    std::string out;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c) out += ' ';
            out += format_rational(m(r, c));
        }
        out += '\n';
    }
    return out;
}

inline std::vector<std::string> matrix_rows_text(const RationalMatrix& m) {
    std::vector<std::string> rows;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        std::string line;
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c) line += ' ';
            line += format_rational(m(r, c));
        }
        rows.push_back(std::move(line));
    }
    return rows;
}

inline RationalMatrix parse_matrix_rows(const std::vector<std::string>& lines) {
    std::vector<Rational> data;
    std::size_t cols = 0;
    for (std::size_t r = 0; r < lines.size(); ++r) {
        std::istringstream ss(lines[r]);
        std::string tok;
        std::size_t count = 0;
        while (ss >> tok) {
            data.push_back(parse_rational(tok));
            ++count;
        }
        if (r == 0) cols = count;
        else if (count != cols) throw ParseError("row " + std::to_string(r + 1) + " has " + std::to_string(count) +
                                                 " entries, expected " + std::to_string(cols));
    }
    return RationalMatrix(lines.size(), cols, std::move(data));
}

/// Reads every matrix in the stream; matrices are separated by blank lines.
inline std::vector<RationalMatrix> read_matrices(std::istream& in) {
    std::vector<RationalMatrix> out;
    std::vector<std::string> block;
    std::string line;
    auto flush = [&] {
        if (!block.empty()) out.push_back(parse_matrix_rows(block));
        block.clear();
    };
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty() && line[0] == '#') continue;
        if (line.find_first_not_of(" \t") == std::string::npos) {
            flush();
            continue;
        }
        block.push_back(line);
    }
    flush();
    return out;
}

inline RationalMatrix parse_matrix(const std::string& text) {
    std::istringstream in(text);
    auto all = read_matrices(in);
    if (all.size() != 1) throw ParseError("expected exactly one matrix, found " + std::to_string(all.size()));
    return all.front();
}

} // namespace cospec
