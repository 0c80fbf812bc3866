// graph_io.hpp - versioned text format for instances plus the ground-truth
// advice sidecar.
//
//   weldlab-graph v1 n=<N> k=<K> variant=<g1|g2|yes|custom>
//   <id> role=<body|antenna|root> loop=<0|1> : <nbr>[x2] <nbr> ...
//
// One line per vertex, ids consecutive from 0. `x2` marks a double edge, a
// self-loop is written as the vertex's own id. Canonical form sorts each
// neighbor list ascending. The sidecar holds `<label> <0|1>` per line.
#pragma once

#include "weldlab/multigraph.hpp"

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace weldlab {

struct GraphFileHeader {
    std::uint64_t n = 0;
    int k = 0;
    std::string variant = "custom";
};

struct ParseError : std::runtime_error {
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_number(line) {}
    std::size_t line_number;
};

void write_graph(std::ostream& os, const MultiGraph& g, const GraphFileHeader& header);
void write_graph_file(const std::string& path, const MultiGraph& g, const GraphFileHeader& header);

struct LoadedGraph {
    MultiGraph graph;
    GraphFileHeader header;
};

LoadedGraph read_graph(std::istream& is);
LoadedGraph read_graph_file(const std::string& path);

void write_advice(std::ostream& os, const std::vector<std::uint8_t>& bits);
void write_advice_file(const std::string& path, const std::vector<std::uint8_t>& bits);
std::vector<std::uint8_t> read_advice(std::istream& is, std::uint64_t expected_n);
std::vector<std::uint8_t> read_advice_file(const std::string& path, std::uint64_t expected_n);

} // namespace weldlab
