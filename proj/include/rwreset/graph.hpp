#pragma once

#include "rwreset/common.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace rwreset {

struct Edge {
    int u = 0;
    int v = 0;
};

/// Finite undirected simple graph with dense 0/1 adjacency.
///
/// Construction enforces the structural invariants (no self-loops, ids in
/// range, symmetric adjacency, duplicates merged). Topological validity
/// (connected, non-bipartite, no isolated node) is a separate check, see
/// validate() and require_valid().
class Graph {
public:
    Graph(int node_count, std::span<const Edge> edges);

    int size() const noexcept { return n_; }
    int degree(int i) const { return static_cast<int>(adj_.at(i).size()); }
    std::int64_t degree_sum() const noexcept { return degree_sum_; }
    std::vector<int> degrees() const;

    /// Sorted neighbor list of node i.
    const std::vector<int>& neighbors(int i) const { return adj_.at(i); }
    bool has_edge(int i, int j) const {
        return dense_[static_cast<std::size_t>(i) * n_ + j] != 0;
    }

    /// Dense adjacency A_ij as doubles.
    Matrix adjacency() const;
    /// Each undirected edge once, with u < v, in lexicographic order.
    std::vector<Edge> edges() const;

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.n_ == b.n_ && a.dense_ == b.dense_;
    }

private:
    int n_;
    std::int64_t degree_sum_ = 0;
    std::vector<std::vector<int>> adj_;
    std::vector<std::uint8_t> dense_;
};

struct GraphDiagnostics {
    bool connected = false;
    bool bipartite = false;
    bool aperiodic = false;
    bool has_isolated_node = false;
};

GraphDiagnostics validate(const Graph& g);

/// Throws ValidationError unless g is connected, non-bipartite and has no
/// isolated node.
void require_valid(const Graph& g);

/// Ring of N nodes, each joined to m neighbors per side (degree 2m), then
/// every ring edge (u, u+j) is rewired with probability rewire_prob to a
/// uniformly chosen new endpoint, avoiding self-loops and duplicates.
struct WattsStrogatz {
    int nodes = 0;
    int neighbors_per_side = 0;
    double rewire_prob = 0.0;
};

/// Growth from a complete seed graph on m+1 nodes; each new node attaches m
/// distinct edges with degree-proportional probability.
struct BarabasiAlbert {
    int nodes = 0;
    int attachment = 0;
};

struct CompleteGraph {
    int nodes = 0;
};

using GraphModel = std::variant<WattsStrogatz, BarabasiAlbert, CompleteGraph>;

inline constexpr int kMaxGenerationRetries = 100;

/// Deterministic given (model, seed). Realizations failing require_valid()
/// are redrawn with derived sub-seeds, at most kMaxGenerationRetries times.
Graph generate_graph(const GraphModel& model, std::uint64_t seed);

std::string describe(const GraphModel& model);

/// Whitespace-separated integer pairs, one edge per line, '#' comments.
/// Node ids are compacted to 0..N-1 preserving order.
Graph load_edge_list(std::string_view text);
Graph load_edge_list_file(const std::filesystem::path& path);
std::string to_edge_list(const Graph& g);

/// Hop distances from the nearest source; -1 for unreachable nodes.
std::vector<int> bfs_distances(const Graph& g, std::span<const int> sources);

/// One-step matrix W_ij = A_ij / K_i of the simple random walk, together with
/// its stationary row K_j / sum_r K_r.
class TransitionMatrix {
public:
    explicit TransitionMatrix(const Graph& g);

    int size() const noexcept { return static_cast<int>(w_.rows()); }
    const Matrix& matrix() const noexcept { return w_; }
    const RowVector& stationary() const noexcept { return stationary_; }
    const Vector& degrees() const noexcept { return degrees_; }

private:
    Matrix w_;
    RowVector stationary_;
    Vector degrees_;
};

inline TransitionMatrix transition_matrix(const Graph& g) { return TransitionMatrix(g); }

}  // namespace rwreset
