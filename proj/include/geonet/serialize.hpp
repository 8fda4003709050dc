#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "geonet/gadgets.hpp"
#include "geonet/network.hpp"
#include "geonet/tree.hpp"

namespace geonet {

namespace ser_detail {

inline std::string double_repr(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && line[i] == ' ') ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

template <class T>
T parse_number(std::string_view tok, std::size_t line_no, const char* what) {
    T value{};
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
        throw ParseError(line_no, std::string("invalid ") + what + " '" + std::string(tok) + "'");
    return value;
}

inline std::string_view expect_key(std::string_view tok, std::string_view key,
                                   std::size_t line_no) {
    if (tok.substr(0, key.size()) != key)
        throw ParseError(line_no, "expected '" + std::string(key) + "...'");
    return tok.substr(key.size());
}

}  // namespace ser_detail

/// Optional gadget metadata carried by a network file.
struct GadgetMeta {
    GadgetKind kind = GadgetKind::diameter;
    std::size_t N = 0;
    bool expected_answer = false;
    int witness = -1;
    CharVector a, b;
};

struct NetworkDocument {
    GeoNetwork network;
    std::optional<GadgetMeta> gadget;
};

/// Canonical text format:
///   geonet v1 n=<n> c=<c> kt=<0|1> [g=<G>]
///   <id> <x> <y>    (n lines, ascending)
///   e <u> <v>       (edges, sorted)
///   gadget kind=<kind> N=<N> expected=<0|1> witness=<i> a=<bits> b=<bits>
inline std::string serialize_network(const GeoNetwork& net,
                                     const GadgetMeta* gadget = nullptr) {
    std::ostringstream out;
    out << "geonet v1 n=" << net.size() << " c=" << ser_detail::double_repr(net.grid_exponent())
        << " kt=" << (net.knowledge() == Knowledge::KT1 ? 1 : 0);
    if (net.grid_side() != grid_side_for(net.size(), net.grid_exponent()))
        out << " g=" << net.grid_side();
    out << '\n';
    for (std::size_t i = 0; i < net.size(); ++i) {
        const auto& p = net.positions()[i];
        out << i << ' ' << p.x << ' ' << p.y << '\n';
    }
    for (const auto& [u, v] : net.edges()) out << "e " << u << ' ' << v << '\n';
    if (gadget) {
        out << "gadget kind=" << gadget_kind_name(gadget->kind) << " N=" << gadget->N
            << " expected=" << (gadget->expected_answer ? 1 : 0)
            << " witness=" << gadget->witness << " a=";
        for (const auto bit : gadget->a) out << (bit ? '1' : '0');
        out << " b=";
        for (const auto bit : gadget->b) out << (bit ? '1' : '0');
        out << '\n';
    }
    return out.str();
}

inline NetworkDocument parse_network(std::string_view text) {
    using namespace ser_detail;
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            if (start < text.size()) lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    if (lines.empty()) throw ParseError(1, "empty network file");

    const auto header = split_ws(lines[0]);
    if (header.size() < 5 || header[0] != "geonet" || header[1] != "v1")
        throw ParseError(1, "expected 'geonet v1' header");
    const auto n = parse_number<std::size_t>(expect_key(header[2], "n=", 1), 1, "node count");
    const auto c = parse_number<double>(expect_key(header[3], "c=", 1), 1, "grid exponent");
    const auto kt = parse_number<int>(expect_key(header[4], "kt=", 1), 1, "knowledge flag");
    std::int64_t explicit_g = 0;
    if (header.size() > 5)
        explicit_g = parse_number<std::int64_t>(expect_key(header[5], "g=", 1), 1, "grid side");
    if (kt != 0 && kt != 1) throw ParseError(1, "kt must be 0 or 1");

    std::vector<GridPoint> positions(n);
    std::size_t line_no = 1;
    for (std::size_t i = 0; i < n; ++i) {
        ++line_no;
        if (line_no > lines.size()) throw ParseError(line_no, "missing node line");
        const auto toks = split_ws(lines[line_no - 1]);
        if (toks.size() != 3) throw ParseError(line_no, "node line needs '<id> <x> <y>'");
        const auto id = parse_number<std::size_t>(toks[0], line_no, "node id");
        if (id != i) throw ParseError(line_no, "node ids must be ascending from 0");
        positions[i].x = parse_number<std::int64_t>(toks[1], line_no, "x coordinate");
        positions[i].y = parse_number<std::int64_t>(toks[2], line_no, "y coordinate");
    }

    std::vector<std::pair<NodeId, NodeId>> edges;
    std::optional<GadgetMeta> gadget;
    while (++line_no <= lines.size()) {
        const auto toks = split_ws(lines[line_no - 1]);
        if (toks.empty()) continue;
        if (toks[0] == "e") {
            if (toks.size() != 3) throw ParseError(line_no, "edge line needs 'e <u> <v>'");
            edges.push_back({parse_number<NodeId>(toks[1], line_no, "edge endpoint"),
                             parse_number<NodeId>(toks[2], line_no, "edge endpoint")});
        } else if (toks[0] == "gadget") {
            if (toks.size() != 7) throw ParseError(line_no, "gadget line needs 6 fields");
            GadgetMeta meta;
            const auto kind = expect_key(toks[1], "kind=", line_no);
            if (kind == "diameter") meta.kind = GadgetKind::diameter;
            else if (kind == "hull") meta.kind = GadgetKind::hull;
            else if (kind == "closest_base") meta.kind = GadgetKind::closest_base;
            else if (kind == "closest_spread") meta.kind = GadgetKind::closest_spread;
            else if (kind == "closest_grouped") meta.kind = GadgetKind::closest_grouped;
            else throw ParseError(line_no, "unknown gadget kind");
            meta.N = parse_number<std::size_t>(expect_key(toks[2], "N=", line_no), line_no, "N");
            meta.expected_answer =
                parse_number<int>(expect_key(toks[3], "expected=", line_no), line_no,
                                  "expected") != 0;
            meta.witness =
                parse_number<int>(expect_key(toks[4], "witness=", line_no), line_no, "witness");
            for (const char ch : expect_key(toks[5], "a=", line_no)) {
                if (ch != '0' && ch != '1') throw ParseError(line_no, "a= must be 0/1 bits");
                meta.a.push_back(ch == '1');
            }
            for (const char ch : expect_key(toks[6], "b=", line_no)) {
                if (ch != '0' && ch != '1') throw ParseError(line_no, "b= must be 0/1 bits");
                meta.b.push_back(ch == '1');
            }
            gadget = std::move(meta);
        } else {
            throw ParseError(line_no, "unrecognized line");
        }
    }

    try {
        return NetworkDocument{GeoNetwork(std::move(positions), std::move(edges), c,
                                          kt == 1 ? Knowledge::KT1 : Knowledge::KT0,
                                          explicit_g),
                               std::move(gadget)};
    } catch (const NetworkError& e) {
        throw ParseError(1, std::string("network validation failed: ") + e.what());
    }
}

/// Parent-array document, so a bootstrap outcome can be pinned and reused.
inline std::string serialize_spanning_tree(const SpanningTree& tree) {
    std::ostringstream out;
    out << "tree v1 n=" << tree.parent.size() << " leader=" << tree.leader
        << " diameter=" << tree.tree_diameter << '\n';
    for (std::size_t i = 0; i < tree.parent.size(); ++i)
        out << i << ' ' << tree.parent[i] << '\n';
    return out.str();
}

inline GadgetMeta gadget_meta_of(const GadgetInstance& inst) {
    GadgetMeta meta;
    meta.kind = inst.kind;
    meta.N = inst.N;
    meta.expected_answer = inst.expected_answer;
    meta.witness = inst.witness;
    meta.a = inst.a;
    meta.b = inst.b;
    return meta;
}

}  // namespace geonet
