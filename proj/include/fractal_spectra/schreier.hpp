#pragma once

#include <algorithm>
#include <array>
#include <deque>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "level_ops.hpp"
#include "matrix.hpp"
#include "tree_groups.hpp"

namespace fractal_spectra {

/// Finite Schreier graph: each generator label acts as a function on the
/// vertex set, so every vertex carries exactly one out-edge per label and
/// degree 4 counting loops.
struct LabeledGraph {
    Group group;
    int level = 0;
    std::vector<std::string> labels;
    std::vector<std::string> vertex_words;
    std::vector<std::vector<std::uint32_t>> succ;  // [label][vertex]
    std::uint32_t basepoint = 0;

    std::size_t size() const { return vertex_words.size(); }
};

/// Schreier graph of the level-n action; vertices are the level-n words,
/// base point 0^n for the d=2 presets and 2^n (the rightmost ray) for the
/// Gamma family.
inline LabeledGraph action_graph(Group g, int n) {
    const int d = alphabet_size(g);
    const std::uint64_t dim = checked_level_dim(g, n);
    LabeledGraph gr;
    gr.group = g;
    gr.level = n;
    gr.labels = generator_names(g);
    gr.vertex_words.reserve(dim);
    for (std::uint64_t i = 0; i < dim; ++i) gr.vertex_words.push_back(index_word(i, d, n).str());
    for (const auto& gen : gr.labels) gr.succ.push_back(level_action(g, gen, n));
    gr.basepoint = (d == 2) ? 0 : static_cast<std::uint32_t>(dim - 1);
    return gr;
}

namespace detail {

inline LabeledGraph substitution_axiom(Group g) {
    LabeledGraph gr;
    gr.group = g;
    gr.level = 0;
    gr.labels = generator_names(g);
    gr.vertex_words = {""};
    gr.succ.assign(4, {0});
    gr.basepoint = 0;
    return gr;
}

// One application of the preset's substitutional rules. Every old edge is
// consumed by exactly one rule; the d=2 gadget expands a-edges into the
// four-vertex path and relabels the 1-block edges cyclically, the d=3 gadget
// expands a-triangles into three triangles plus the transported s/t/r edges.
inline LabeledGraph substitution_step(const LabeledGraph& old) {
    const Group g = old.group;
    const std::uint32_t V = static_cast<std::uint32_t>(old.size());
    const int d = alphabet_size(g);
    LabeledGraph nu;
    nu.group = g;
    nu.level = old.level + 1;
    nu.labels = old.labels;
    nu.vertex_words.resize(static_cast<std::size_t>(d) * V);
    for (int x = 0; x < d; ++x)
        for (std::uint32_t u = 0; u < V; ++u)
            nu.vertex_words[static_cast<std::size_t>(x) * V + u] =
                std::string(1, static_cast<char>('0' + x)) + old.vertex_words[u];
    nu.succ.assign(4, std::vector<std::uint32_t>(static_cast<std::size_t>(d) * V));

    auto& A = nu.succ[0];
    if (d == 2) {
        const auto& b_old = old.succ[1];
        const auto& c_old = old.succ[2];
        const auto& d_old = old.succ[3];
        const auto& a_old = old.succ[0];
        auto& B = nu.succ[1];
        auto& C = nu.succ[2];
        auto& D = nu.succ[3];
        for (std::uint32_t u = 0; u < V; ++u) {
            A[u] = V + u;      // gadget: a-edge 0s -- 1s
            A[V + u] = u;
            if (g == Group::G) {
                B[u] = a_old[u];  // gadget: double edge b,c across the old a-edge
                C[u] = a_old[u];
                D[u] = u;         // gadget: d-loop
                B[V + u] = V + c_old[u];  // relabel c -> b on the 1-block
                C[V + u] = V + d_old[u];  // relabel d -> c
                D[V + u] = V + b_old[u];  // relabel b -> d
            } else {  // Gtilde
                B[u] = a_old[u];  // gadget: single b-edge across the old a-edge
                C[u] = u;         // gadget: c-loop
                D[u] = u;         // gadget: d-loop
                B[V + u] = V + c_old[u];
                C[V + u] = V + d_old[u];
                D[V + u] = V + b_old[u];
            }
        }
        nu.basepoint = old.basepoint;  // 0^n stays at index 0
        return nu;
    }

    const auto& a_old = old.succ[0];
    const auto& ai_old = old.succ[1];
    const auto& s_old = old.succ[2];
    const auto& si_old = old.succ[3];
    auto& Ai = nu.succ[1];
    auto& S = nu.succ[2];
    auto& Si = nu.succ[3];
    for (std::uint32_t u = 0; u < V; ++u) {
        // parallel a-triangle 0s -> 1s -> 2s -> 0s at every old vertex
        A[u] = V + u;
        A[V + u] = 2 * V + u;
        A[2 * V + u] = u;
        Ai[V + u] = u;
        Ai[2 * V + u] = V + u;
        Ai[u] = 2 * V + u;
        // transported generator edges
        S[2 * V + u] = 2 * V + s_old[u];
        Si[2 * V + u] = 2 * V + si_old[u];
        S[u] = a_old[u];      // 0-block follows the old a-edges
        Si[u] = ai_old[u];
        switch (g) {
            case Group::Gamma:
                S[V + u] = V + u;  // s-loops on the 1-block
                Si[V + u] = V + u;
                break;
            case Group::GammaBar:
                S[V + u] = V + a_old[u];
                Si[V + u] = V + ai_old[u];
                break;
            case Group::GammaBarBar:
                S[V + u] = V + ai_old[u];  // reversed triangle on the 1-block
                Si[V + u] = V + a_old[u];
                break;
            default:
                throw internal_error("substitution_step: bad tag");
        }
    }
    nu.basepoint = 2 * V + old.basepoint;  // 2^n stays the last vertex
    return nu;
}

}  // namespace detail

/// Applies the preset's substitutional rules n times to the one-vertex axiom.
inline LabeledGraph substitution_graph(Group g, int n) {
    checked_level_dim(g, n);
    LabeledGraph gr = detail::substitution_axiom(g);
    for (int i = 0; i < n; ++i) gr = detail::substitution_step(gr);
    for (const auto& s : gr.succ)
        if (s.size() != gr.size()) throw internal_error("substitution_graph: malformed rule application");
    return gr;
}

/// Base-point-preserving, label-preserving isomorphism test. Labels act as
/// functions on vertices, so the map is forced by a BFS from the base points.
inline bool labeled_isomorphic(const LabeledGraph& g1, const LabeledGraph& g2) {
    if (g1.labels != g2.labels || g1.size() != g2.size()) return false;
    const std::size_t n = g1.size();
    constexpr std::uint32_t unset = 0xffffffffu;
    std::vector<std::uint32_t> map(n, unset), hit(n, unset);
    std::deque<std::uint32_t> queue;
    map[g1.basepoint] = g2.basepoint;
    hit[g2.basepoint] = g1.basepoint;
    queue.push_back(g1.basepoint);
    std::size_t matched = 1;
    while (!queue.empty()) {
        const std::uint32_t u = queue.front();
        queue.pop_front();
        for (std::size_t l = 0; l < g1.labels.size(); ++l) {
            const std::uint32_t v1 = g1.succ[l][u];
            const std::uint32_t v2 = g2.succ[l][map[u]];
            if (map[v1] == unset) {
                if (hit[v2] != unset) return false;
                map[v1] = v2;
                hit[v2] = v1;
                ++matched;
                queue.push_back(v1);
            } else if (map[v1] != v2) {
                return false;
            }
        }
    }
    return matched == n;
}

// ---------------------------------------------------------------------------
// Growth, diameter, adjacency
// ---------------------------------------------------------------------------

struct GrowthSeries {
    std::vector<long> coeffs;  // coeffs[i] = vertices at distance i from the base point
};

struct GrowthResult {
    GrowthSeries growth;
    int basepoint_eccentricity = 0;
    std::optional<int> diameter;  // all-pairs, only computed for small graphs
};

namespace detail {

inline std::vector<std::vector<std::uint32_t>> undirected_adjacency(const LabeledGraph& g) {
    std::vector<std::vector<std::uint32_t>> adj(g.size());
    for (const auto& s : g.succ)
        for (std::uint32_t u = 0; u < g.size(); ++u) {
            const std::uint32_t v = s[u];
            if (v == u) continue;  // loops ignored for distance
            adj[u].push_back(v);
            adj[v].push_back(u);
        }
    return adj;
}

inline std::vector<int> bfs_distances(const std::vector<std::vector<std::uint32_t>>& adj, std::uint32_t src) {
    std::vector<int> dist(adj.size(), -1);
    std::deque<std::uint32_t> queue{src};
    dist[src] = 0;
    while (!queue.empty()) {
        const std::uint32_t u = queue.front();
        queue.pop_front();
        for (std::uint32_t v : adj[u])
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
    }
    return dist;
}

}  // namespace detail

/// BFS growth series from the base point; exact all-pairs diameter for small
/// graphs, base-point eccentricity otherwise.
inline GrowthResult growth_and_diameter(const LabeledGraph& g, std::size_t exact_diameter_limit = 243) {
    const auto adj = detail::undirected_adjacency(g);
    const auto dist = detail::bfs_distances(adj, g.basepoint);
    GrowthResult r;
    int ecc = 0;
    for (int d : dist) {
        if (d < 0) throw input_error("growth_and_diameter: graph is disconnected");
        ecc = std::max(ecc, d);
    }
    r.basepoint_eccentricity = ecc;
    r.growth.coeffs.assign(static_cast<std::size_t>(ecc) + 1, 0);
    for (int d : dist) ++r.growth.coeffs[static_cast<std::size_t>(d)];
    if (g.size() <= exact_diameter_limit) {
        int diam = 0;
        for (std::uint32_t v = 0; v < g.size(); ++v) {
            const auto dv = detail::bfs_distances(adj, v);
            for (int d : dv) diam = std::max(diam, d);
        }
        r.diameter = diam;
    }
    return r;
}

/// Adjacency-with-loops matrix; equals the Hecke operator of the preset when
/// the graph came from the level action.
inline LevelMatrix graph_adjacency(const LabeledGraph& g) {
    const std::size_t n = g.size();
    LevelMatrix m(n, n);
    for (const auto& s : g.succ)
        for (std::uint32_t u = 0; u < n; ++u) m(s[u], u) += Rational(1);
    return m;
}

// ---------------------------------------------------------------------------
// Export / import
// ---------------------------------------------------------------------------

/// DOT digraph with one edge line per (vertex, label): 4 d^n lines, ordered
/// lexicographically by vertex word then label position.
inline std::string export_dot(const LabeledGraph& g) {
    std::ostringstream os;
    os << "digraph schreier {\n";
    for (std::uint32_t u = 0; u < g.size(); ++u) os << "  \"" << g.vertex_words[u] << "\";\n";
    for (std::uint32_t u = 0; u < g.size(); ++u)
        for (std::size_t l = 0; l < g.labels.size(); ++l)
            os << "  \"" << g.vertex_words[u] << "\" -> \"" << g.vertex_words[g.succ[l][u]]
               << "\" [label=\"" << g.labels[l] << "\"];\n";
    os << "}\n";
    return os.str();
}

inline std::string export_csv(const LabeledGraph& g) {
    std::ostringstream os;
    os << "src,dst,label\n";
    for (std::uint32_t u = 0; u < g.size(); ++u)
        for (std::size_t l = 0; l < g.labels.size(); ++l)
            os << g.vertex_words[u] << "," << g.vertex_words[g.succ[l][u]] << "," << g.labels[l] << "\n";
    return os.str();
}

/// Inverse of export_csv for graphs it produced (base point defaults to the
/// first vertex; basepoints are not part of the CSV surface).
inline LabeledGraph import_csv(const std::string& csv, Group group, int level) {
    LabeledGraph g;
    g.group = group;
    g.level = level;
    std::istringstream is(csv);
    std::string line;
    if (!std::getline(is, line) || line != "src,dst,label") throw input_error("import_csv: missing header");
    std::vector<std::array<std::string, 3>> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos) throw input_error("import_csv: bad row");
        rows.push_back({line.substr(0, c1), line.substr(c1 + 1, c2 - c1 - 1), line.substr(c2 + 1)});
    }
    std::vector<std::string> words;
    auto vertex_id = [&](const std::string& w) -> std::uint32_t {
        for (std::size_t i = 0; i < words.size(); ++i)
            if (words[i] == w) return static_cast<std::uint32_t>(i);
        words.push_back(w);
        return static_cast<std::uint32_t>(words.size() - 1);
    };
    std::vector<std::string> labels;
    auto label_id = [&](const std::string& l) -> std::size_t {
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == l) return i;
        labels.push_back(l);
        return labels.size() - 1;
    };
    for (const auto& row : rows) {
        vertex_id(row[0]);
        label_id(row[2]);
    }
    g.vertex_words = words;
    g.labels = labels;
    g.succ.assign(labels.size(), std::vector<std::uint32_t>(words.size(), 0));
    for (const auto& row : rows) g.succ[label_id(row[2])][vertex_id(row[0])] = vertex_id(row[1]);
    g.basepoint = 0;
    return g;
}

}  // namespace fractal_spectra
