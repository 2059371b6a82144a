#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ampsamp/circuit.hpp" // tokenize / parse_complex_token / cplx
#include "ampsamp/rng.hpp"

namespace ampsamp {

constexpr int kMaxGraphEdges = 64;       // edge subsets live in a 64-bit mask
constexpr int kGadgetMaxEdges = 24;      // weighted_cycle_sum enumeration guard
constexpr int kOverlapMaxCycleDim = 22;  // product_state_overlap guard
constexpr int kMarginalMaxCycleDim = 16; // marginal_overlap guard

/// Undirected multigraph with optional dangling edges (one endpoint) and
/// per-edge complex weights. Edge order is the file/order of construction;
/// bit j of a cycle mask refers to edges[j].
struct PlanarGraph {
    struct Edge {
        int id = 0;       // external label (unique)
        int u = 0;        // endpoint; self-loops have u == v
        int v = -1;       // -1 for dangling edges
        cplx weight = 1.0;
    };
    std::vector<Edge> edges;
    std::vector<std::vector<int>> faces;            // edge indices per face
    std::map<int, std::vector<int>> vertex_order;   // clockwise edge indices

    int n() const { return static_cast<int>(edges.size()); }
    int edge_index(int id) const {
        for (int j = 0; j < n(); ++j)
            if (edges[static_cast<std::size_t>(j)].id == id) return j;
        throw guard_error("unknown edge id " + std::to_string(id));
    }
    int num_vertices() const {
        int mx = -1;
        for (const auto& e : edges) {
            mx = std::max(mx, e.u);
            mx = std::max(mx, e.v);
        }
        return mx + 1;
    }
    std::vector<int> dangling_edges() const { // in edge order
        std::vector<int> d;
        for (int j = 0; j < n(); ++j)
            if (edges[static_cast<std::size_t>(j)].v < 0) d.push_back(j);
        return d;
    }
};

namespace detail {

/// GF(2) basis of the kernel of the vertex-edge incidence matrix: all edge
/// subsets with even incidence at every vertex. Self-loops and dangling
/// stubs contribute no constraint beyond their single endpoint (self-loops:
/// none at all, they touch their vertex twice).
inline std::vector<std::uint64_t> cycle_kernel_basis(const PlanarGraph& g) {
    const int ne = g.n();
    if (ne > kMaxGraphEdges) throw guard_error("graph exceeds 64-edge mask guard");
    const int nv = g.num_vertices();
    // rows[v] = mask of edges incident to v an odd number of times
    std::vector<std::uint64_t> rows(static_cast<std::size_t>(nv), 0);
    for (int j = 0; j < ne; ++j) {
        const auto& e = g.edges[static_cast<std::size_t>(j)];
        if (e.v == e.u) continue; // self-loop: even at its vertex
        rows[static_cast<std::size_t>(e.u)] ^= std::uint64_t{1} << j;
        if (e.v >= 0) rows[static_cast<std::size_t>(e.v)] ^= std::uint64_t{1} << j;
    }
    // row-reduce; kernel via back-substitution over free columns
    std::vector<int> pivot_col;
    std::size_t rank = 0;
    for (int col = 0; col < ne && rank < rows.size(); ++col) {
        std::size_t sel = rows.size();
        for (std::size_t i = rank; i < rows.size(); ++i)
            if (rows[i] & (std::uint64_t{1} << col)) {
                sel = i;
                break;
            }
        if (sel == rows.size()) continue;
        std::swap(rows[rank], rows[sel]);
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (i != rank && (rows[i] & (std::uint64_t{1} << col))) rows[i] ^= rows[rank];
        pivot_col.push_back(col);
        ++rank;
    }
    std::vector<bool> is_pivot(static_cast<std::size_t>(ne), false);
    for (int c : pivot_col) is_pivot[static_cast<std::size_t>(c)] = true;
    std::vector<std::uint64_t> basis;
    for (int free_col = 0; free_col < ne; ++free_col) {
        if (is_pivot[static_cast<std::size_t>(free_col)]) continue;
        std::uint64_t vec = std::uint64_t{1} << free_col;
        for (std::size_t i = 0; i < rank; ++i)
            if (rows[i] & (std::uint64_t{1} << free_col))
                vec |= std::uint64_t{1} << pivot_col[i];
        basis.push_back(vec);
    }
    return basis;
}

inline bool is_cycle_mask(const PlanarGraph& g, std::uint64_t mask) {
    std::map<int, int> inc;
    for (int j = 0; j < g.n(); ++j) {
        if (!(mask & (std::uint64_t{1} << j))) continue;
        const auto& e = g.edges[static_cast<std::size_t>(j)];
        if (e.u == e.v) continue;
        inc[e.u] ^= 1;
        if (e.v >= 0) inc[e.v] ^= 1;
    }
    for (const auto& [v, parity] : inc)
        if (parity) return false;
    return true;
}

inline int gf2_rank(std::vector<std::uint64_t> vecs) {
    int rank = 0;
    for (int col = 0; col < 64; ++col) {
        std::size_t sel = vecs.size();
        for (std::size_t i = static_cast<std::size_t>(rank); i < vecs.size(); ++i)
            if (vecs[i] & (std::uint64_t{1} << col)) {
                sel = i;
                break;
            }
        if (sel == vecs.size()) continue;
        std::swap(vecs[static_cast<std::size_t>(rank)], vecs[sel]);
        for (std::size_t i = 0; i < vecs.size(); ++i)
            if (i != static_cast<std::size_t>(rank) && (vecs[i] & (std::uint64_t{1} << col)))
                vecs[i] ^= vecs[static_cast<std::size_t>(rank)];
        ++rank;
    }
    return rank;
}

} // namespace detail

/// Basis of the cycle space. When faces are supplied, returns the face
/// boundaries after verifying each is a cycle and that together they span;
/// otherwise falls back to the incidence-kernel basis.
inline std::vector<std::uint64_t> cycle_space_basis(const PlanarGraph& g) {
    auto kernel = detail::cycle_kernel_basis(g);
    if (g.faces.empty()) return kernel;
    std::vector<std::uint64_t> face_vecs;
    for (const auto& f : g.faces) {
        std::uint64_t mask = 0;
        for (int j : f) mask ^= std::uint64_t{1} << j;
        if (!detail::is_cycle_mask(g, mask))
            throw guard_error("face boundary is not a cycle");
        face_vecs.push_back(mask);
    }
    if (detail::gf2_rank(face_vecs) != static_cast<int>(kernel.size()))
        throw guard_error("face boundaries do not span the cycle space");
    return face_vecs;
}

inline int cycle_space_dim(const PlanarGraph& g) {
    return static_cast<int>(detail::cycle_kernel_basis(g).size());
}

/// Uniform sample from the cycle space: random GF(2) combination of basis
/// vectors.
inline std::uint64_t sample_cycle(const PlanarGraph& g, const std::vector<std::uint64_t>& basis,
                                  Rng& rng) {
    std::uint64_t x = 0;
    for (std::uint64_t b : basis)
        if (rng() & 1) x ^= b;
    (void)g;
    return x;
}

/// All cycles, enumerated from a basis (2^dim of them).
inline std::vector<std::uint64_t> enumerate_cycles(const std::vector<std::uint64_t>& basis,
                                                   int dim_guard) {
    if (static_cast<int>(basis.size()) > dim_guard)
        throw guard_error("cycle space dimension " + std::to_string(basis.size()) +
                          " exceeds guard " + std::to_string(dim_guard));
    std::vector<std::uint64_t> all(std::size_t{1} << basis.size(), 0);
    for (std::size_t r = 0; r < all.size(); ++r) {
        std::uint64_t x = 0;
        for (std::size_t j = 0; j < basis.size(); ++j)
            if ((r >> j) & 1) x ^= basis[j];
        all[r] = x;
    }
    return all;
}

/// Cycle(Theta, z) = sum over cycles restricting to z on the dangling edges
/// of the product of internal edge weights.
inline cplx weighted_cycle_sum(const PlanarGraph& g, std::uint64_t z) {
    if (g.n() > kGadgetMaxEdges) throw guard_error("weighted_cycle_sum: too many edges");
    const auto dangling = g.dangling_edges();
    const auto basis = detail::cycle_kernel_basis(g);
    cplx acc = 0;
    for (std::uint64_t x : enumerate_cycles(basis, kGadgetMaxEdges)) {
        std::uint64_t restr = 0;
        for (std::size_t i = 0; i < dangling.size(); ++i)
            restr |= ((x >> dangling[i]) & 1) << i;
        if (restr != z) continue;
        cplx prod = 1;
        for (int j = 0; j < g.n(); ++j)
            if ((x >> j) & 1) prod *= g.edges[static_cast<std::size_t>(j)].weight;
        acc += prod;
    }
    return acc;
}

/// <Phi|psi_G> for a product state Phi given as per-edge 2-vectors
/// (phi[j][b] = <b|phi_j>); psi_G is the uniform superposition of cycles.
inline cplx product_state_overlap(const PlanarGraph& g,
                                  const std::vector<std::array<cplx, 2>>& phi) {
    if (static_cast<int>(phi.size()) != g.n())
        throw guard_error("product_state_overlap: one state per edge required");
    const auto basis = detail::cycle_kernel_basis(g);
    const auto cycles = enumerate_cycles(basis, kOverlapMaxCycleDim);
    cplx acc = 0;
    for (std::uint64_t x : cycles) {
        cplx prod = 1;
        for (int j = 0; j < g.n(); ++j)
            prod *= std::conj(phi[static_cast<std::size_t>(j)][(x >> j) & 1]);
        acc += prod;
    }
    return acc / std::sqrt(static_cast<double>(cycles.size()));
}

/// mu(G, M, Phi) = <Phi|rho_M|Phi>: cycles grouped by their restriction
/// outside M, one coherent sum per group.
inline double marginal_overlap(const PlanarGraph& g, const std::vector<int>& m_edges,
                               const std::vector<std::array<cplx, 2>>& phi) {
    if (phi.size() != m_edges.size())
        throw guard_error("marginal_overlap: one state per marked edge required");
    std::uint64_t mmask = 0;
    for (int j : m_edges) mmask |= std::uint64_t{1} << j;
    const auto basis = detail::cycle_kernel_basis(g);
    const auto cycles = enumerate_cycles(basis, kMarginalMaxCycleDim);
    std::map<std::uint64_t, cplx> groups; // outside-restriction -> coherent sum
    for (std::uint64_t x : cycles) {
        cplx prod = 1;
        for (std::size_t i = 0; i < m_edges.size(); ++i)
            prod *= std::conj(phi[i][(x >> m_edges[i]) & 1]);
        groups[x & ~mmask] += prod;
    }
    double mu = 0;
    for (const auto& [y, s] : groups) mu += std::norm(s);
    return mu / static_cast<double>(cycles.size());
}

/// Graph file: sections "edges" ("id u v", "id u -" for dangling),
/// "faces" (edge-id lists), "weights" ("id re,im"), "order"
/// ("vertex id id ..." clockwise).
inline PlanarGraph parse_graph(const std::string& text, const std::string& file = "<string>") {
    PlanarGraph g;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    enum class Section { None, Edges, Faces, Weights, Order } sec = Section::None;
    std::vector<std::pair<int, cplx>> weights;
    std::vector<std::vector<int>> face_ids;
    std::vector<std::pair<int, std::vector<int>>> orders;
    while (std::getline(in, line)) {
        ++lineno;
        auto toks = detail::tokenize(line);
        if (toks.empty()) continue;
        if (toks[0] == "edges") { sec = Section::Edges; continue; }
        if (toks[0] == "faces") { sec = Section::Faces; continue; }
        if (toks[0] == "weights") { sec = Section::Weights; continue; }
        if (toks[0] == "order") { sec = Section::Order; continue; }
        try {
            switch (sec) {
            case Section::Edges: {
                if (toks.size() != 3) throw parse_error(file, lineno, "edge needs 'id u v'");
                PlanarGraph::Edge e;
                e.id = std::stoi(toks[0]);
                e.u = std::stoi(toks[1]);
                e.v = (toks[2] == "-") ? -1 : std::stoi(toks[2]);
                if (e.u < 0) throw parse_error(file, lineno, "bad endpoint");
                g.edges.push_back(e);
                break;
            }
            case Section::Faces: {
                std::vector<int> f;
                for (const auto& t : toks) f.push_back(std::stoi(t));
                face_ids.push_back(std::move(f));
                break;
            }
            case Section::Weights: {
                if (toks.size() != 2) throw parse_error(file, lineno, "weight needs 'id re,im'");
                weights.emplace_back(std::stoi(toks[0]),
                                     detail::parse_complex_token(toks[1], file, lineno));
                break;
            }
            case Section::Order: {
                if (toks.size() < 2) throw parse_error(file, lineno, "order needs 'vertex ids...'");
                std::vector<int> ids;
                for (std::size_t i = 1; i < toks.size(); ++i) ids.push_back(std::stoi(toks[i]));
                orders.emplace_back(std::stoi(toks[0]), std::move(ids));
                break;
            }
            default:
                throw parse_error(file, lineno, "content outside a section");
            }
        } catch (const std::invalid_argument&) {
            throw parse_error(file, lineno, "bad integer token");
        }
    }
    if (g.edges.empty()) throw parse_error(file, lineno, "graph has no edges");
    if (g.n() > kMaxGraphEdges) throw parse_error(file, 0, "too many edges");
    for (std::size_t i = 0; i < g.edges.size(); ++i)
        for (std::size_t l = i + 1; l < g.edges.size(); ++l)
            if (g.edges[i].id == g.edges[l].id)
                throw parse_error(file, 0, "duplicate edge id " + std::to_string(g.edges[i].id));
    for (const auto& [id, w] : weights) {
        auto& e = g.edges[static_cast<std::size_t>(g.edge_index(id))];
        if (e.v < 0 && std::abs(w - cplx{1, 0}) > 1e-12)
            throw parse_error(file, 0, "dangling edges must keep weight 1");
        e.weight = w;
    }
    for (const auto& f : face_ids) {
        std::vector<int> idxs;
        for (int id : f) idxs.push_back(g.edge_index(id));
        g.faces.push_back(std::move(idxs));
    }
    for (auto& [v, ids] : orders) {
        std::vector<int> idxs;
        for (int id : ids) idxs.push_back(g.edge_index(id));
        g.vertex_order[v] = std::move(idxs);
    }
    // validate faces now so errors carry the file name
    cycle_space_basis(g);
    return g;
}

inline PlanarGraph parse_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error(path, 0, "cannot open graph file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_graph(ss.str(), path);
}

} // namespace ampsamp
