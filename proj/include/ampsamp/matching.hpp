#pragma once

#include "ampsamp/gadgets.hpp"

namespace ampsamp {

/// A 3-regular multigraph together with a pre-planarized drawing: plain
/// edges never cross; each crossing of two edges is given explicitly as a
/// degree-4 crossing point with its over/under pairing.
struct MatchingInstance {
    int num_vertices = 0;
    // edges of the original graph that are drawn without crossings
    std::vector<std::pair<int, int>> plain_edges;
    struct Crossing {
        int over_u, over_v;   // original edge traversing above the plane
        int under_u, under_v; // original edge traversing below the plane
    };
    std::vector<Crossing> crossings;

    std::vector<std::pair<int, int>> original_edges() const {
        auto e = plain_edges;
        for (const auto& c : crossings) {
            e.emplace_back(c.over_u, c.over_v);
            e.emplace_back(c.under_u, c.under_v);
        }
        return e;
    }
};

/// Instance file: "vertices N", then "edge u v" and
/// "crossing u1 v1 u2 v2" (edge u1-v1 crosses over edge u2-v2).
inline MatchingInstance parse_matching_instance(const std::string& text,
                                                const std::string& file = "<string>") {
    MatchingInstance inst;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool have_n = false;
    while (std::getline(in, line)) {
        ++lineno;
        auto toks = detail::tokenize(line);
        if (toks.empty()) continue;
        try {
            if (!have_n) {
                if (toks[0] != "vertices" || toks.size() != 2)
                    throw parse_error(file, lineno, "expected 'vertices N' first");
                inst.num_vertices = std::stoi(toks[1]);
                have_n = true;
            } else if (toks[0] == "edge" && toks.size() == 3) {
                inst.plain_edges.emplace_back(std::stoi(toks[1]), std::stoi(toks[2]));
            } else if (toks[0] == "crossing" && toks.size() == 5) {
                inst.crossings.push_back({std::stoi(toks[1]), std::stoi(toks[2]),
                                          std::stoi(toks[3]), std::stoi(toks[4])});
            } else {
                throw parse_error(file, lineno, "expected 'edge u v' or 'crossing u1 v1 u2 v2'");
            }
        } catch (const std::invalid_argument&) {
            throw parse_error(file, lineno, "bad integer token");
        }
    }
    if (!have_n) throw parse_error(file, lineno, "empty instance file");
    std::vector<int> deg(static_cast<std::size_t>(inst.num_vertices), 0);
    for (const auto& [u, v] : inst.original_edges()) {
        if (u < 0 || v < 0 || u >= inst.num_vertices || v >= inst.num_vertices)
            throw parse_error(file, 0, "vertex index out of range");
        ++deg[static_cast<std::size_t>(u)];
        ++deg[static_cast<std::size_t>(v)];
    }
    for (int d : deg)
        if (d != 3) throw parse_error(file, 0, "graph is not 3-regular");
    return inst;
}

inline MatchingInstance parse_matching_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error(path, 0, "cannot open matching instance");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_matching_instance(ss.str(), path);
}

/// Brute-force perfect-matching count over all edge subsets.
inline long long count_perfect_matchings(const MatchingInstance& inst) {
    const auto edges = inst.original_edges();
    const int ne = static_cast<int>(edges.size());
    if (ne > 30) throw guard_error("matching brute force: too many edges");
    long long count = 0;
    for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << ne); ++sub) {
        std::vector<int> deg(static_cast<std::size_t>(inst.num_vertices), 0);
        for (int j = 0; j < ne; ++j)
            if ((sub >> j) & 1) {
                ++deg[static_cast<std::size_t>(edges[static_cast<std::size_t>(j)].first)];
                ++deg[static_cast<std::size_t>(edges[static_cast<std::size_t>(j)].second)];
            }
        bool ok = true;
        for (int d : deg)
            if (d != 1) ok = false;
        if (ok) ++count;
    }
    return count;
}

struct ReductionResult {
    double raw = 0;        // sigma * |Z(G)| * mu before rounding
    long long count = 0;   // rounded perfect-matching count
    double mu = 0;         // the surface-code marginal
    int cycle_dim = 0;
    long long brute_force = 0;
};

/// Counts perfect matchings of a 3-regular graph through the surface-code
/// marginal: substitute the triangle gadget at original vertices and the
/// crossing gadget at crossing points, assemble the product state on
/// internal edges, and evaluate sigma * |Z(G)| * <Phi|rho_M|Phi>.
inline ReductionResult perfect_matchings_via_reduction(const MatchingInstance& inst) {
    PlanarGraph g;
    int next_vertex = 0;
    int next_id = 0;
    // original vertices carry three unordered stubs; crossing points carry
    // four ordered stubs (over, under, over, under)
    std::vector<std::vector<int>> vertex_stubs(static_cast<std::size_t>(inst.num_vertices));
    std::vector<std::array<int, 4>> crossing_stubs;
    std::vector<int> internal_edges;
    double sigma = 1.0;
    double state_norm_product = 1.0;

    auto add_gadget = [&](const PlanarGraph& proto) {
        const int vbase = next_vertex;
        std::vector<int> stub_idx;
        for (const auto& e : proto.edges) {
            PlanarGraph::Edge ne;
            ne.id = next_id++;
            ne.u = e.u + vbase;
            ne.v = e.v < 0 ? -1 : e.v + vbase;
            ne.weight = e.weight;
            const int idx = g.n();
            g.edges.push_back(ne);
            if (e.v < 0)
                stub_idx.push_back(idx);
            else {
                internal_edges.push_back(idx);
                state_norm_product *= 1.0 + std::norm(e.weight);
            }
        }
        next_vertex += proto.num_vertices();
        return stub_idx;
    };

    const PlanarGraph theta = theta_gadget();
    const PlanarGraph gamma = crossing_gadget();
    for (int u = 0; u < inst.num_vertices; ++u) {
        vertex_stubs[static_cast<std::size_t>(u)] = add_gadget(theta);
        sigma *= theta_tau();
    }
    for (std::size_t c = 0; c < inst.crossings.size(); ++c) {
        auto stubs = add_gadget(gamma);
        // gadget dangling order (e1,e2,e3,e4): pairs (e1,e3) and (e2,e4)
        // pass through, so interleave the over and under stubs
        crossing_stubs.push_back({stubs[0], stubs[1], stubs[2], stubs[3]});
        sigma *= crossing_tau();
    }

    // splice two stubs into one external edge: retarget every use of the
    // second stub's dangling end onto the first stub's free end
    auto take_stub = [&](std::vector<int>& pool) {
        if (pool.empty()) throw guard_error("reduction: vertex degree mismatch");
        int idx = pool.back();
        pool.pop_back();
        return idx;
    };
    auto splice = [&](int idx_a, int idx_b) {
        // stub edges are (vertex)-(dangling); fuse them into one edge
        g.edges[static_cast<std::size_t>(idx_a)].v = g.edges[static_cast<std::size_t>(idx_b)].u;
        g.edges[static_cast<std::size_t>(idx_b)].u = -2; // mark for removal
    };

    std::vector<std::array<int, 4>> cross_ports = crossing_stubs;
    std::size_t ci = 0;
    // connection endpoints: original vertices draw from their stub pool;
    // crossing points expose ports 0/2 to the over edge and 1/3 to the under
    auto connect = [&](int u, int v, int port_u, int port_v) {
        const int a = port_u < 0 ? take_stub(vertex_stubs[static_cast<std::size_t>(u)])
                                 : cross_ports[static_cast<std::size_t>(u)][static_cast<std::size_t>(port_u)];
        const int b = port_v < 0 ? take_stub(vertex_stubs[static_cast<std::size_t>(v)])
                                 : cross_ports[static_cast<std::size_t>(v)][static_cast<std::size_t>(port_v)];
        splice(a, b);
    };
    for (const auto& [u, v] : inst.plain_edges) connect(u, v, -1, -1);
    for (const auto& cr : inst.crossings) {
        connect(cr.over_u, static_cast<int>(ci), -1, 0);
        connect(static_cast<int>(ci), cr.over_v, 2, -1);
        connect(cr.under_u, static_cast<int>(ci), -1, 1);
        connect(static_cast<int>(ci), cr.under_v, 3, -1);
        ++ci;
    }

    // drop the absorbed half-edges, remapping internal edge indices
    {
        PlanarGraph packed;
        std::map<int, int> remap;
        for (int j = 0; j < g.n(); ++j) {
            if (g.edges[static_cast<std::size_t>(j)].u == -2) continue;
            remap[j] = packed.n();
            packed.edges.push_back(g.edges[static_cast<std::size_t>(j)]);
        }
        for (int& idx : internal_edges) idx = remap.at(idx);
        g = std::move(packed);
    }
    if (!g.dangling_edges().empty())
        throw guard_error("reduction: unmatched gadget stubs remain");

    ReductionResult res;
    res.cycle_dim = cycle_space_dim(g);
    std::vector<std::array<cplx, 2>> phi;
    for (int idx : internal_edges) {
        const cplx f = g.edges[static_cast<std::size_t>(idx)].weight;
        const double nrm = std::sqrt(1.0 + std::norm(f));
        phi.push_back({cplx{1.0, 0.0} / nrm, f / nrm});
    }
    res.mu = marginal_overlap(g, internal_edges, phi);
    const double zsize = std::pow(2.0, res.cycle_dim);
    res.raw = sigma * state_norm_product * zsize * res.mu;
    res.count = std::llround(res.raw);
    if (std::abs(res.raw - static_cast<double>(res.count)) > 1e-6)
        throw guard_error("reduction produced a non-integer count: " + std::to_string(res.raw));
    res.brute_force = count_perfect_matchings(inst);
    return res;
}

} // namespace ampsamp
