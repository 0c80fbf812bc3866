#include "weldlab/multigraph.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace weldlab {

void MultiGraph::validate() const {
    const VertexId n = vertex_count();
    // (u,v,kind) multiplicities seen from each side, keyed with u < v.
    std::map<std::tuple<VertexId, VertexId, EdgeKind>, std::pair<int, int>> mult;
    for (VertexId v = 0; v < n; ++v) {
        int loops_seen = 0;
        for (int i = 0; i < slot_count_[v]; ++i) {
            const NeighborEntry e = slot(v, i);
            if (e.neighbor >= n)
                throw std::runtime_error("dangling neighbor id at vertex " + std::to_string(v));
            if (e.neighbor == v) {
                ++loops_seen;
                if (e.kind != EdgeKind::Single)
                    throw std::runtime_error("self-loop stored with non-single kind at vertex " + std::to_string(v));
                continue;
            }
            auto key = std::make_tuple(std::min(v, e.neighbor), std::max(v, e.neighbor), e.kind);
            if (v < e.neighbor) ++mult[key].first;
            else ++mult[key].second;
        }
        if (loops_seen > 1)
            throw std::runtime_error("multiple self-loops at vertex " + std::to_string(v));
        if (loops_seen != (loops_[v] ? 1 : 0))
            throw std::runtime_error("loop flag inconsistent with slots at vertex " + std::to_string(v));
        if (degree(v) > kMaxDegree)
            throw std::runtime_error("degree bound violated at vertex " + std::to_string(v));
    }
    for (const auto& [key, counts] : mult) {
        if (counts.first != counts.second)
            throw std::runtime_error("asymmetric edge between " + std::to_string(std::get<0>(key)) +
                                     " and " + std::to_string(std::get<1>(key)));
    }
}

void MultiGraph::canonicalize() {
    const VertexId n = vertex_count();
    NeighborEntry buf[kMaxDegree];
    for (VertexId v = 0; v < n; ++v) {
        const int m = slot_count_[v];
        for (int i = 0; i < m; ++i) buf[i] = slot(v, i);
        std::sort(buf, buf + m, [](const NeighborEntry& a, const NeighborEntry& b) {
            if (a.neighbor != b.neighbor) return a.neighbor < b.neighbor;
            return static_cast<int>(a.kind) < static_cast<int>(b.kind);
        });
        for (int i = 0; i < m; ++i) {
            const std::size_t at = static_cast<std::size_t>(v) * kMaxDegree + static_cast<std::size_t>(i);
            nbr_[at] = buf[i].neighbor;
            kind_[at] = static_cast<std::uint8_t>(buf[i].kind);
        }
    }
}

} // namespace weldlab
