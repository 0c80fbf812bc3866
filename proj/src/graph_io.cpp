#include "weldlab/graph_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

namespace weldlab {

namespace {

VertexRole parse_role(const std::string& s, std::size_t line) {
    if (s == "body") return VertexRole::Body;
    if (s == "antenna") return VertexRole::Antenna;
    if (s == "root") return VertexRole::Root;
    throw ParseError(line, "unknown role '" + s + "'");
}

} // namespace

void write_graph(std::ostream& os, const MultiGraph& g, const GraphFileHeader& header) {
    os << "weldlab-graph v1 n=" << g.vertex_count() << " k=" << header.k
       << " variant=" << header.variant << "\n";
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        std::vector<NeighborEntry> nbrs = g.neighbors(v);
        std::sort(nbrs.begin(), nbrs.end(), [](const NeighborEntry& a, const NeighborEntry& b) {
            if (a.neighbor != b.neighbor) return a.neighbor < b.neighbor;
            return static_cast<int>(a.kind) < static_cast<int>(b.kind);
        });
        os << v << " role=" << role_name(g.role(v)) << " loop=" << (g.has_loop(v) ? 1 : 0) << " :";
        for (const NeighborEntry& e : nbrs) {
            os << ' ' << e.neighbor;
            if (e.kind == EdgeKind::Double) os << "x2";
        }
        os << "\n";
    }
}

void write_graph_file(const std::string& path, const MultiGraph& g, const GraphFileHeader& header) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    write_graph(os, g, header);
}

LoadedGraph read_graph(std::istream& is) {
    std::string line;
    std::size_t lineno = 0;

    if (!std::getline(is, line)) throw ParseError(1, "missing header");
    ++lineno;
    GraphFileHeader header;
    {
        std::istringstream hs(line);
        std::string magic, version, field;
        hs >> magic >> version;
        if (magic != "weldlab-graph" || version != "v1")
            throw ParseError(lineno, "bad magic; expected 'weldlab-graph v1'");
        bool saw_n = false;
        while (hs >> field) {
            const auto eq = field.find('=');
            if (eq == std::string::npos) throw ParseError(lineno, "malformed header field '" + field + "'");
            const std::string key = field.substr(0, eq), val = field.substr(eq + 1);
            if (key == "n") { header.n = std::stoull(val); saw_n = true; }
            else if (key == "k") header.k = std::stoi(val);
            else if (key == "variant") header.variant = val;
            else throw ParseError(lineno, "unknown header field '" + key + "'");
        }
        if (!saw_n) throw ParseError(lineno, "header missing n=");
    }

    LoadedGraph out;
    out.header = header;
    if (header.n > 200'000'000ULL) throw ParseError(lineno, "vertex count implausibly large");
    out.graph.resize(static_cast<VertexId>(header.n));

    // Edges are recorded on first sight (from the lower-id endpoint) and
    // checked off from the higher-id side, so asymmetric lists are caught.
    std::vector<std::vector<NeighborEntry>> pending(static_cast<std::size_t>(header.n));

    VertexId expected_id = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::uint64_t id64;
        std::string role_field, loop_field, colon;
        if (!(ls >> id64 >> role_field >> loop_field >> colon) || colon != ":")
            throw ParseError(lineno, "malformed vertex line");
        if (id64 != expected_id)
            throw ParseError(lineno, "expected vertex " + std::to_string(expected_id) +
                                         ", got " + std::to_string(id64));
        const VertexId v = static_cast<VertexId>(id64);
        if (role_field.rfind("role=", 0) != 0 || loop_field.rfind("loop=", 0) != 0)
            throw ParseError(lineno, "expected role=... loop=...");
        out.graph.set_role(v, parse_role(role_field.substr(5), lineno));
        const std::string loop_val = loop_field.substr(5);
        if (loop_val != "0" && loop_val != "1") throw ParseError(lineno, "loop= must be 0 or 1");
        const bool loop = loop_val == "1";
        bool loop_seen = false;

        std::string tok;
        while (ls >> tok) {
            EdgeKind kind = EdgeKind::Single;
            if (tok.size() > 2 && tok.substr(tok.size() - 2) == "x2") {
                kind = EdgeKind::Double;
                tok.resize(tok.size() - 2);
            }
            std::uint64_t nbr64 = 0;
            const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), nbr64);
            if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
                throw ParseError(lineno, "bad neighbor token '" + tok + "'");
            if (nbr64 >= header.n)
                throw ParseError(lineno, "neighbor " + std::to_string(nbr64) + " out of range");
            const VertexId u = static_cast<VertexId>(nbr64);
            if (u == v) {
                if (kind == EdgeKind::Double) throw ParseError(lineno, "self-loop cannot be a double edge");
                if (loop_seen) throw ParseError(lineno, "more than one self-loop");
                loop_seen = true;
                try {
                    out.graph.add_loop(v);
                } catch (const std::exception& e) {
                    throw ParseError(lineno, e.what());
                }
                continue;
            }
            if (u > v) {
                pending[v].push_back({u, kind});
            } else {
                auto& waiting = pending[u];
                auto it = std::find_if(waiting.begin(), waiting.end(), [&](const NeighborEntry& e) {
                    return e.neighbor == v && e.kind == kind;
                });
                if (it == waiting.end())
                    throw ParseError(lineno, "asymmetric edge list: " + std::to_string(v) + " -> " +
                                                 std::to_string(u) + " has no matching entry");
                waiting.erase(it);
                try {
                    out.graph.add_edge(u, v, kind);
                } catch (const std::exception& e) {
                    throw ParseError(lineno, e.what());
                }
            }
        }
        if (loop != loop_seen)
            throw ParseError(lineno, "loop flag disagrees with neighbor list");
        // Degree accounting includes edges still pending from this side.
        int deg = out.graph.degree(v);
        for (const NeighborEntry& e : pending[v]) deg += e.kind == EdgeKind::Double ? 2 : 1;
        if (deg > kMaxDegree) throw ParseError(lineno, "degree bound violated at vertex " + std::to_string(v));
        ++expected_id;
    }
    if (expected_id != header.n)
        throw ParseError(lineno, "file ends after " + std::to_string(expected_id) + " of " +
                                     std::to_string(header.n) + " vertices");
    for (VertexId v = 0; v < out.graph.vertex_count(); ++v)
        if (!pending[v].empty())
            throw ParseError(lineno, "asymmetric edge list: vertex " + std::to_string(v) +
                                         " lists neighbor " + std::to_string(pending[v].front().neighbor) +
                                         " with no matching entry");
    out.graph.canonicalize();
    return out;
}

LoadedGraph read_graph_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    return read_graph(is);
}

void write_advice(std::ostream& os, const std::vector<std::uint8_t>& bits) {
    for (std::size_t i = 0; i < bits.size(); ++i)
        os << i << ' ' << (bits[i] ? 1 : 0) << "\n";
}

void write_advice_file(const std::string& path, const std::vector<std::uint8_t>& bits) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    write_advice(os, bits);
}

std::vector<std::uint8_t> read_advice(std::istream& is, std::uint64_t expected_n) {
    std::vector<std::uint8_t> bits(expected_n, 0);
    std::vector<bool> seen(expected_n, false);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::uint64_t label;
        int bit;
        if (!(ls >> label >> bit) || (bit != 0 && bit != 1))
            throw ParseError(lineno, "expected '<label> <0|1>'");
        if (label >= expected_n) throw ParseError(lineno, "label out of range");
        if (seen[label]) throw ParseError(lineno, "duplicate label");
        seen[label] = true;
        bits[label] = static_cast<std::uint8_t>(bit);
    }
    for (std::uint64_t i = 0; i < expected_n; ++i)
        if (!seen[i]) throw ParseError(lineno, "missing advice for label " + std::to_string(i));
    return bits;
}

std::vector<std::uint8_t> read_advice_file(const std::string& path, std::uint64_t expected_n) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    return read_advice(is, expected_n);
}

} // namespace weldlab
