#include "weldlab/oracle.hpp"

#include <stdexcept>
#include <unordered_map>

namespace weldlab {

BodyComponent OracleHandle::peek_body_component(Label root) {
    const MultiGraph& g = *graph_;
    const VertexId r = to_internal(root);
    if (g.role(r) != VertexRole::Root)
        throw std::invalid_argument("peek_body_component: label is not a root");

    BodyComponent comp;
    std::unordered_map<VertexId, std::uint32_t> index;
    std::vector<VertexId> order;
    auto intern = [&](VertexId v) {
        auto it = index.find(v);
        if (it != index.end()) return it->second;
        const auto idx = static_cast<std::uint32_t>(order.size());
        index.emplace(v, idx);
        order.push_back(v);
        return idx;
    };

    intern(r);
    for (std::uint32_t head = 0; head < order.size(); ++head) {
        const VertexId v = order[head];
        const bool at_root = g.role(v) == VertexRole::Root;
        for (const NeighborEntry& e : g.neighbors(v)) {
            if (e.kind == EdgeKind::Double) continue;     // advice edges dropped
            if (e.neighbor == v) continue;                // self-loops dropped
            if (at_root && g.role(e.neighbor) == VertexRole::Antenna) continue; // severed
            if (g.role(e.neighbor) == VertexRole::Antenna) continue; // safety: stay in body
            intern(e.neighbor);
        }
    }

    comp.labels.reserve(order.size());
    comp.adj.assign(order.size(), {});
    for (std::uint32_t i = 0; i < order.size(); ++i) {
        const VertexId v = order[i];
        comp.labels.push_back(id_to_label_[v]);
        if (g.role(v) == VertexRole::Root) comp.roots.push_back(i);
        for (const NeighborEntry& e : g.neighbors(v)) {
            if (e.kind == EdgeKind::Double || e.neighbor == v) continue;
            if (g.role(e.neighbor) == VertexRole::Antenna) continue;
            comp.adj[i].push_back(index.at(e.neighbor));
        }
    }
    return comp;
}

} // namespace weldlab
