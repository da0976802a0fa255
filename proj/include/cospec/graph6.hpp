#pragma once

// graph6 encoding: N(n) followed by the upper triangle of the adjacency
// matrix, column by column, packed six bits per byte with 63 added.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "errors.hpp"
#include "graph.hpp"

namespace cospec {

inline constexpr std::string_view kGraph6Header = ">>graph6<<";

inline std::string to_graph6(const Graph& g) {
    const std::size_t n = g.order();
    std::string out;
    if (n <= 62) {
        out.push_back(static_cast<char>(63 + n));
    } else if (n <= 258047) {
        out.push_back(126);
        for (int shift = 12; shift >= 0; shift -= 6) out.push_back(static_cast<char>(63 + ((n >> shift) & 63)));
    } else if (n <= 68719476735ULL) {
        out.push_back(126);
        out.push_back(126);
        for (int shift = 30; shift >= 0; shift -= 6) out.push_back(static_cast<char>(63 + ((n >> shift) & 63)));
    } else {
        throw DimensionError("graph6: order too large");
    }
    int acc = 0, bits = 0;
    for (std::size_t v = 1; v < n; ++v)
        for (std::size_t u = 0; u < v; ++u) {
            acc = (acc << 1) | (g.has_edge(u, v) ? 1 : 0);
            if (++bits == 6) {
                out.push_back(static_cast<char>(63 + acc));
                acc = bits = 0;
            }
        }
    if (bits > 0) out.push_back(static_cast<char>(63 + (acc << (6 - bits))));
    return out;
}

inline Graph from_graph6(std::string_view text) {
    if (text.starts_with(kGraph6Header)) text.remove_prefix(kGraph6Header.size());
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.remove_suffix(1);
    std::size_t pos = 0;
    auto take = [&]() -> int {
        if (pos >= text.size()) throw ParseError("graph6: unexpected end of input");
        const int c = static_cast<unsigned char>(text[pos++]);
        if (c < 63 || c > 126) throw ParseError("graph6: byte out of range at offset " + std::to_string(pos - 1));
        return c - 63;
    };
    std::uint64_t n = 0;
    const int first = take();
    if (first < 63) {
        n = static_cast<std::uint64_t>(first);
    } else {
        const int second = take();
        const int words = second == 63 ? 6 : 3;
        if (words == 3) n = static_cast<std::uint64_t>(second);
        for (int i = (words == 3 ? 1 : 0); i < words; ++i) n = (n << 6) | static_cast<std::uint64_t>(take());
        if (words == 3 && n <= 62) throw ParseError("graph6: non-minimal order encoding");
    }
    Graph g(static_cast<std::size_t>(n));
    int acc = 0, bits = 0;
    for (std::size_t v = 1; v < n; ++v)
        for (std::size_t u = 0; u < v; ++u) {
            if (bits == 0) {
                acc = take();
                bits = 6;
            }
            --bits;
            if (acc >> bits & 1) g.add_edge(u, v);
        }
    if (pos != text.size()) throw ParseError("graph6: trailing bytes");
    if (bits > 0 && (acc & ((1 << bits) - 1)) != 0) throw ParseError("graph6: nonzero padding bits");
    return g;
}

} // namespace cospec
