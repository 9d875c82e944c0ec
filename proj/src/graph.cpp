#include "rwreset/graph.hpp"

#include "rwreset/rng.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>

namespace rwreset {

Graph::Graph(int node_count, std::span<const Edge> edges)
    : n_(node_count), adj_(node_count > 0 ? node_count : 0) {
    if (node_count < 1) {
        throw ParameterError("graph needs at least one node");
    }
    dense_.assign(static_cast<std::size_t>(n_) * n_, 0);
    for (const Edge& e : edges) {
        if (e.u < 0 || e.v < 0 || e.u >= n_ || e.v >= n_) {
            throw ValidationError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                                  ") references a node outside 0.." + std::to_string(n_ - 1));
        }
        if (e.u == e.v) {
            throw ValidationError("self-loop at node " + std::to_string(e.u));
        }
        auto& uv = dense_[static_cast<std::size_t>(e.u) * n_ + e.v];
        if (uv != 0) continue;
        uv = 1;
        dense_[static_cast<std::size_t>(e.v) * n_ + e.u] = 1;
        adj_[e.u].push_back(e.v);
        adj_[e.v].push_back(e.u);
        degree_sum_ += 2;
    }
    for (auto& list : adj_) std::sort(list.begin(), list.end());
}

std::vector<int> Graph::degrees() const {
    std::vector<int> k(n_);
    for (int i = 0; i < n_; ++i) k[i] = degree(i);
    return k;
}

Matrix Graph::adjacency() const {
    Matrix a = Matrix::Zero(n_, n_);
    for (int i = 0; i < n_; ++i) {
        for (int j : adj_[i]) a(i, j) = 1.0;
    }
    return a;
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(static_cast<std::size_t>(degree_sum_ / 2));
    for (int i = 0; i < n_; ++i) {
        for (int j : adj_[i]) {
            if (i < j) out.push_back({i, j});
        }
    }
    return out;
}

GraphDiagnostics validate(const Graph& g) {
    const int n = g.size();
    GraphDiagnostics d;
    std::vector<int> color(n, -1);
    int components = 0;
    d.bipartite = true;
    for (int s = 0; s < n; ++s) {
        if (g.degree(s) == 0) d.has_isolated_node = true;
        if (color[s] != -1) continue;
        ++components;
        color[s] = 0;
        std::queue<int> frontier;
        frontier.push(s);
        while (!frontier.empty()) {
            const int u = frontier.front();
            frontier.pop();
            for (int v : g.neighbors(u)) {
                if (color[v] == -1) {
                    color[v] = 1 - color[u];
                    frontier.push(v);
                } else if (color[v] == color[u]) {
                    d.bipartite = false;
                }
            }
        }
    }
    d.connected = components == 1;
    // An undirected connected graph is aperiodic iff it has an odd cycle.
    d.aperiodic = d.connected && !d.bipartite;
    return d;
}

void require_valid(const Graph& g) {
    const GraphDiagnostics d = validate(g);
    if (d.has_isolated_node) throw ValidationError("graph has an isolated node");
    if (!d.connected) throw ValidationError("graph is disconnected");
    if (d.bipartite) throw ValidationError("graph is bipartite (walk would be periodic)");
}

namespace {

Graph make_complete(const CompleteGraph& m) {
    if (m.nodes < 3) throw ParameterError("complete graph needs N >= 3");
    std::vector<Edge> edges;
    for (int i = 0; i < m.nodes; ++i) {
        for (int j = i + 1; j < m.nodes; ++j) edges.push_back({i, j});
    }
    return Graph(m.nodes, edges);
}

void check_params(const WattsStrogatz& m) {
    if (m.nodes < 3) throw ParameterError("Watts-Strogatz needs N >= 3");
    if (m.neighbors_per_side < 1 || 2 * m.neighbors_per_side >= m.nodes) {
        throw ParameterError("Watts-Strogatz needs 1 <= m and 2m < N");
    }
    if (!(m.rewire_prob >= 0.0 && m.rewire_prob <= 1.0)) {
        throw ParameterError("Watts-Strogatz rewiring probability must lie in [0, 1]");
    }
}

void check_params(const BarabasiAlbert& m) {
    if (m.nodes < 3) throw ParameterError("Barabasi-Albert needs N >= 3");
    if (m.attachment < 1 || m.attachment >= m.nodes) {
        throw ParameterError("Barabasi-Albert needs 1 <= m < N");
    }
}

// Mutable adjacency sets used during generation only.
class EdgeSet {
public:
    explicit EdgeSet(int n) : n_(n), bits_(static_cast<std::size_t>(n) * n, 0), degree_(n, 0) {}
    bool has(int u, int v) const { return bits_[idx(u, v)] != 0; }
    void add(int u, int v) {
        bits_[idx(u, v)] = bits_[idx(v, u)] = 1;
        ++degree_[u];
        ++degree_[v];
    }
    void remove(int u, int v) {
        bits_[idx(u, v)] = bits_[idx(v, u)] = 0;
        --degree_[u];
        --degree_[v];
    }
    int degree(int u) const { return degree_[u]; }
    std::vector<Edge> edges() const {
        std::vector<Edge> out;
        for (int i = 0; i < n_; ++i) {
            for (int j = i + 1; j < n_; ++j) {
                if (has(i, j)) out.push_back({i, j});
            }
        }
        return out;
    }

private:
    std::size_t idx(int u, int v) const { return static_cast<std::size_t>(u) * n_ + v; }
    int n_;
    std::vector<std::uint8_t> bits_;
    std::vector<int> degree_;
};

Graph make_watts_strogatz(const WattsStrogatz& m, std::uint64_t seed) {
    const int n = m.nodes;
    SplitMix64 rng(seed);
    EdgeSet es(n);
    for (int j = 1; j <= m.neighbors_per_side; ++j) {
        for (int u = 0; u < n; ++u) es.add(u, (u + j) % n);
    }
    for (int j = 1; j <= m.neighbors_per_side; ++j) {
        for (int u = 0; u < n; ++u) {
            const int v = (u + j) % n;
            if (!es.has(u, v) || !rng.bernoulli(m.rewire_prob)) continue;
            if (es.degree(u) >= n - 1) continue;
            int w = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
            while (w == u || es.has(u, w)) {
                w = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
            }
            es.remove(u, v);
            es.add(u, w);
        }
    }
    const auto edges = es.edges();
    return Graph(n, edges);
}

Graph make_barabasi_albert(const BarabasiAlbert& m, std::uint64_t seed) {
    const int n = m.nodes;
    const int k = m.attachment;
    SplitMix64 rng(seed);
    std::vector<Edge> edges;
    // Each node appears once per incident edge end, so a uniform pick is
    // degree-proportional.
    std::vector<int> ends;
    for (int i = 0; i <= k; ++i) {
        for (int j = i + 1; j <= k; ++j) {
            edges.push_back({i, j});
            ends.push_back(i);
            ends.push_back(j);
        }
    }
    std::vector<int> chosen;
    for (int s = k + 1; s < n; ++s) {
        chosen.clear();
        while (static_cast<int>(chosen.size()) < k) {
            const int t = ends[rng.below(ends.size())];
            if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) chosen.push_back(t);
        }
        for (int t : chosen) {
            edges.push_back({t, s});
            ends.push_back(t);
            ends.push_back(s);
        }
    }
    return Graph(n, edges);
}

}  // namespace

Graph generate_graph(const GraphModel& model, std::uint64_t seed) {
    if (const auto* cc = std::get_if<CompleteGraph>(&model)) {
        Graph g = make_complete(*cc);
        require_valid(g);
        return g;
    }
    std::visit([](const auto& m) {
        if constexpr (!std::is_same_v<std::decay_t<decltype(m)>, CompleteGraph>) check_params(m);
    }, model);
    for (int attempt = 0; attempt < kMaxGenerationRetries; ++attempt) {
        const std::uint64_t sub_seed = attempt == 0 ? seed : derive_seed(seed, attempt);
        Graph g = std::holds_alternative<WattsStrogatz>(model)
                      ? make_watts_strogatz(std::get<WattsStrogatz>(model), sub_seed)
                      : make_barabasi_albert(std::get<BarabasiAlbert>(model), sub_seed);
        const GraphDiagnostics d = validate(g);
        if (d.connected && !d.bipartite && !d.has_isolated_node) return g;
    }
    throw ValidationError("no valid realization of " + describe(model) + " within " +
                          std::to_string(kMaxGenerationRetries) + " retries");
}

std::string describe(const GraphModel& model) {
    return std::visit([](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        std::ostringstream os;
        if constexpr (std::is_same_v<T, WattsStrogatz>) {
            os << "ws:" << m.nodes << ',' << m.neighbors_per_side << ',' << m.rewire_prob;
        } else if constexpr (std::is_same_v<T, BarabasiAlbert>) {
            os << "ba:" << m.nodes << ',' << m.attachment;
        } else {
            os << "cc:" << m.nodes;
        }
        return os.str();
    }, model);
}

namespace {

bool parse_node_id(std::string_view token, long long& out) {
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && out >= 0;
}

}  // namespace

Graph load_edge_list(std::string_view text) {
    std::vector<std::pair<long long, long long>> raw;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream fields(line);
        std::string a, b, extra;
        if (!(fields >> a >> b) || (fields >> extra)) {
            throw ParseError("edge list line " + std::to_string(line_no) +
                             ": expected two node ids");
        }
        long long u = 0, v = 0;
        if (!parse_node_id(a, u) || !parse_node_id(b, v)) {
            throw ParseError("edge list line " + std::to_string(line_no) +
                             ": node ids must be non-negative integers");
        }
        if (u == v) {
            throw ParseError("edge list line " + std::to_string(line_no) + ": self-loop at node " +
                             std::to_string(u));
        }
        raw.emplace_back(u, v);
    }
    if (raw.empty()) throw ParseError("edge list contains no edges");

    std::map<long long, int> index;
    for (const auto& [u, v] : raw) {
        index.emplace(u, 0);
        index.emplace(v, 0);
    }
    int next = 0;
    for (auto& [id, slot] : index) slot = next++;
    std::vector<Edge> edges;
    edges.reserve(raw.size());
    for (const auto& [u, v] : raw) edges.push_back({index[u], index[v]});

    Graph g(next, edges);
    require_valid(g);
    return g;
}

Graph load_edge_list_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open edge list " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_edge_list(buf.str());
}

std::string to_edge_list(const Graph& g) {
    std::ostringstream os;
    for (const Edge& e : g.edges()) os << e.u << ' ' << e.v << '\n';
    return os.str();
}

std::vector<int> bfs_distances(const Graph& g, std::span<const int> sources) {
    std::vector<int> dist(g.size(), -1);
    std::queue<int> frontier;
    for (int s : sources) {
        if (dist.at(s) == -1) {
            dist[s] = 0;
            frontier.push(s);
        }
    }
    while (!frontier.empty()) {
        const int u = frontier.front();
        frontier.pop();
        for (int v : g.neighbors(u)) {
            if (dist[v] == -1) {
                dist[v] = dist[u] + 1;
                frontier.push(v);
            }
        }
    }
    return dist;
}

TransitionMatrix::TransitionMatrix(const Graph& g) {
    require_valid(g);
    const int n = g.size();
    w_ = Matrix::Zero(n, n);
    degrees_.resize(n);
    stationary_.resize(n);
    const double total = static_cast<double>(g.degree_sum());
    for (int i = 0; i < n; ++i) {
        const double k = g.degree(i);
        degrees_(i) = k;
        stationary_(i) = k / total;
        for (int j : g.neighbors(i)) w_(i, j) = 1.0 / k;
    }
}

}  // namespace rwreset
