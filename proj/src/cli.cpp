#include "rwreset/cli.hpp"

#include "rwreset/csv.hpp"
#include "rwreset/firstpassage.hpp"
#include "rwreset/montecarlo.hpp"
#include "rwreset/propagator.hpp"
#include "rwreset/rng.hpp"
#include "rwreset/survival.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

namespace rwreset::cli {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto next = s.find(sep, pos);
        out.push_back(s.substr(pos, next - pos));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

template <class T>
T parse_number(std::string_view text, std::string_view what) {
    T value{};
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || text.empty()) {
        throw ParseError("invalid " + std::string(what) + ": '" + std::string(text) + "'");
    }
    return value;
}

std::pair<std::string_view, std::string_view> split_kind(std::string_view spec, std::string_view what) {
    const auto colon = spec.find(':');
    if (colon == std::string_view::npos) {
        throw ParseError("invalid " + std::string(what) + " '" + std::string(spec) + "': expected KIND:ARGS");
    }
    return {spec.substr(0, colon), spec.substr(colon + 1)};
}

}  // namespace

std::variant<GraphModel, EdgeListFile> parse_graph_spec(std::string_view spec) {
    const auto [kind, rest] = split_kind(spec, "graph spec");
    if (kind == "edgelist") {
        if (rest.empty()) throw ParseError("edgelist: needs a path");
        return EdgeListFile{std::string(rest)};
    }
    const auto args = split(rest, ',');
    if (kind == "ws") {
        if (args.size() != 3) throw ParseError("ws: expects N,m,rewire_prob");
        return GraphModel{WattsStrogatz{parse_number<int>(args[0], "N"), parse_number<int>(args[1], "m"),
                                        parse_number<double>(args[2], "rewiring probability")}};
    }
    if (kind == "ba") {
        if (args.size() != 2) throw ParseError("ba: expects N,m");
        return GraphModel{BarabasiAlbert{parse_number<int>(args[0], "N"), parse_number<int>(args[1], "m")}};
    }
    if (kind == "cc") {
        if (args.size() != 1) throw ParseError("cc: expects N");
        return GraphModel{CompleteGraph{parse_number<int>(args[0], "N")}};
    }
    throw ParseError("unknown graph kind '" + std::string(kind) + "'");
}

ResetLaw parse_law(std::string_view spec) {
    const auto [kind, rest] = split_kind(spec, "law spec");
    if (kind == "geom") return ResetLaw::geometric(parse_number<double>(rest, "reset probability"));
    if (kind == "sibuya") return ResetLaw::sibuya(parse_number<double>(rest, "Sibuya exponent"));
    if (kind == "period") return ResetLaw::deterministic(parse_number<std::int64_t>(rest, "period"));
    if (kind == "finite") return load_finite_support_csv(std::string(rest));
    throw ParseError("unknown law kind '" + std::string(kind) + "'");
}

std::vector<double> parse_grid(std::string_view spec) {
    const auto parts = split(spec, ':');
    if (parts.size() != 3) throw ParseError("grid '" + std::string(spec) + "': expected a:b:n");
    const double a = parse_number<double>(parts[0], "grid start");
    const double b = parse_number<double>(parts[1], "grid end");
    const int n = parse_number<int>(parts[2], "grid size");
    if (n < 1) throw ValidationError("grid needs at least one point");
    if (!(a > 0.0 && b < 1.0)) throw ValidationError("grid points must lie inside (0, 1)");
    if (n == 1) {
        if (a != b) throw ValidationError("a one-point grid needs a == b");
        return {a};
    }
    if (!(a < b)) throw ValidationError("grid must be strictly increasing");
    std::vector<double> out(n);
    for (int k = 0; k < n; ++k) out[k] = a + (b - a) * k / (n - 1);
    out.back() = b;
    return out;
}

namespace {

struct Options {
    std::string graph;
    std::uint64_t seed = 1;
    std::string law;
    std::string reloc = "uniform:1";
    std::string targets;
    std::string pgrid = "0.01:0.99:99";
    std::string agrid = "0.01:0.99:99";
    std::string out;
    std::int64_t trials = 10000;
    std::int64_t horizon = 100;
    std::optional<int> start;
    std::string pairs;
    bool emit_edgelist = false;
    std::string summary;
    std::string stat = "occupation";
    std::string dump;
    std::int64_t dump_trials = 10;
};

// Everything derived from the options that the provenance block echoes.
struct Context {
    Options opt;
    std::string command;
    std::uint64_t graph_seed = 0;
    std::uint64_t reloc_seed = 0;
    std::uint64_t target_seed = 0;
    std::uint64_t sim_seed = 0;
    std::optional<Graph> graph;
    std::string graph_desc;
    std::vector<int> r_nodes;
    std::vector<int> t_nodes;
    std::optional<RelocationVector> relocation;

    const Graph& g() const { return *graph; }
};

std::string join(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ' ';
        s += std::to_string(v[i]);
    }
    return s;
}

Graph build_graph(Context& ctx) {
    if (ctx.opt.graph.empty()) throw ParseError("--graph is required");
    const auto spec = parse_graph_spec(ctx.opt.graph);
    if (const auto* file = std::get_if<EdgeListFile>(&spec)) {
        ctx.graph_desc = "edgelist:" + file->path;
        return load_edge_list_file(file->path);
    }
    const auto& model = std::get<GraphModel>(spec);
    ctx.graph_desc = describe(model);
    return generate_graph(model, ctx.graph_seed);
}

// Per-node Bernoulli(frac) draws, redrawn while the result is rejected.
std::vector<int> bernoulli_nodes(int n, double frac, std::uint64_t seed, bool allow_all,
                                 std::string_view what) {
    if (!(frac > 0.0 && frac <= 1.0)) {
        throw ValidationError(std::string(what) + " fraction must lie in (0, 1]");
    }
    for (int attempt = 0; attempt < kMaxGenerationRetries; ++attempt) {
        SplitMix64 rng(attempt == 0 ? seed : derive_seed(seed, attempt));
        std::vector<int> nodes;
        for (int j = 0; j < n; ++j) {
            if (rng.uniform() < frac) nodes.push_back(j);
        }
        if (!nodes.empty() && (allow_all || static_cast<int>(nodes.size()) < n)) return nodes;
    }
    throw ValidationError("could not draw a usable " + std::string(what) + " set");
}

std::vector<int> parse_node_list(std::string_view text, int n) {
    std::vector<int> nodes;
    for (auto item : split(text, ',')) {
        const int j = parse_number<int>(item, "node id");
        if (j < 0 || j >= n) throw ValidationError("node " + std::to_string(j) + " out of range");
        nodes.push_back(j);
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    return nodes;
}

RowVector load_vector_file(const std::string& path, int n) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open relocation vector file " + path);
    std::vector<double> values;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) values.push_back(parse_number<double>(tok, "relocation probability"));
    }
    if (static_cast<int>(values.size()) != n) {
        throw ValidationError("relocation vector has " + std::to_string(values.size()) + " entries, graph has " +
                              std::to_string(n) + " nodes");
    }
    return Eigen::Map<const RowVector>(values.data(), n);
}

RelocationVector build_relocation(Context& ctx) {
    const int n = ctx.g().size();
    const auto [kind, rest] = split_kind(ctx.opt.reloc, "relocation spec");
    if (kind == "uniform" || kind == "degree") {
        const double frac = parse_number<double>(rest, "relocation fraction");
        ctx.r_nodes = bernoulli_nodes(n, frac, ctx.reloc_seed, true, "r-node");
        return kind == "uniform" ? RelocationVector::uniform(n, ctx.r_nodes)
                                 : RelocationVector::degree_weighted(ctx.g(), ctx.r_nodes);
    }
    if (kind == "node") {
        const int j = parse_number<int>(rest, "relocation node");
        if (j < 0 || j >= n) throw ValidationError("relocation node out of range");
        ctx.r_nodes = {j};
        return RelocationVector::single_node(n, j);
    }
    if (kind == "vec") {
        RelocationVector rel(load_vector_file(std::string(rest), n));
        ctx.r_nodes = rel.support();
        return rel;
    }
    throw ParseError("unknown relocation kind '" + std::string(kind) + "'");
}

std::vector<int> build_targets(Context& ctx) {
    const int n = ctx.g().size();
    if (ctx.opt.targets.empty()) throw ParseError("--targets is required for this command");
    const auto [kind, rest] = split_kind(ctx.opt.targets, "target spec");
    std::vector<int> nodes;
    if (kind == "set") {
        nodes = parse_node_list(rest, n);
    } else if (kind == "frac") {
        nodes = bernoulli_nodes(n, parse_number<double>(rest, "target fraction"), ctx.target_seed, false, "t-node");
    } else {
        throw ParseError("unknown target kind '" + std::string(kind) + "'");
    }
    if (nodes.empty()) throw ValidationError("target set is empty");
    if (static_cast<int>(nodes.size()) == n) throw ValidationError("target set covers every node");
    return nodes;
}

ResetLaw require_law(const Context& ctx) {
    if (ctx.opt.law.empty()) throw ParseError("--law is required for this command");
    return parse_law(ctx.opt.law);
}

int require_start(const Context& ctx) {
    const int start = ctx.opt.start.value_or(0);
    if (start < 0 || start >= ctx.g().size()) throw ValidationError("--start out of range");
    return start;
}

Provenance provenance(const Context& ctx) {
    Provenance p;
    p.emplace_back("rwreset", RWRESET_VERSION);
    p.emplace_back("command", ctx.command);
    p.emplace_back("graph", ctx.graph_desc);
    p.emplace_back("seed", std::to_string(ctx.opt.seed));
    p.emplace_back("graph_seed", std::to_string(ctx.graph_seed));
    p.emplace_back("reloc_seed", std::to_string(ctx.reloc_seed));
    p.emplace_back("target_seed", std::to_string(ctx.target_seed));
    p.emplace_back("sim_seed", std::to_string(ctx.sim_seed));
    if (ctx.graph) {
        p.emplace_back("nodes", std::to_string(ctx.g().size()));
        p.emplace_back("edges", std::to_string(ctx.g().degree_sum() / 2));
    }
    const auto& o = ctx.opt;
    if (!o.law.empty()) p.emplace_back("law", o.law);
    p.emplace_back("reloc", o.reloc);
    if (!o.targets.empty()) p.emplace_back("targets", o.targets);
    p.emplace_back("pgrid", o.pgrid);
    p.emplace_back("agrid", o.agrid);
    p.emplace_back("horizon", std::to_string(o.horizon));
    p.emplace_back("trials", std::to_string(o.trials));
    if (o.start) p.emplace_back("start", std::to_string(*o.start));
    if (!o.pairs.empty()) p.emplace_back("pairs", o.pairs);
    if (ctx.relocation) p.emplace_back("r_nodes", join(ctx.r_nodes));
    if (!ctx.t_nodes.empty()) p.emplace_back("t_nodes", join(ctx.t_nodes));
    return p;
}

void emit(const Context& ctx, const CsvTable& table, std::ostream& out, const Provenance& extra = {}) {
    Provenance p = provenance(ctx);
    p.insert(p.end(), extra.begin(), extra.end());
    if (ctx.opt.out.empty()) {
        write_csv(out, table, p);
    } else {
        write_csv(ctx.opt.out, table, p);
    }
}

// Evaluates fn(k) for k in [0, count) on worker threads; results keep grid order.
template <class T>
std::vector<T> parallel_map(std::size_t count, const std::function<T(std::size_t)>& fn) {
    std::vector<std::optional<T>> slots(count);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t k = next++; k < count; k = next++) {
            try {
                slots[k].emplace(fn(k));
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), count));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
    std::vector<T> out;
    out.reserve(count);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

int cmd_graph(Context& ctx, std::ostream& out) {
    const Graph& g = ctx.g();
    if (ctx.opt.emit_edgelist) {
        std::ostringstream body;
        for (const auto& [key, value] : provenance(ctx)) body << "# " << key << ": " << value << '\n';
        body << to_edge_list(g);
        if (ctx.opt.out.empty()) {
            out << body.str();
        } else {
            std::ofstream f(ctx.opt.out, std::ios::binary);
            if (!f) throw std::runtime_error("cannot open " + ctx.opt.out + " for writing");
            f << body.str();
        }
        return kExitOk;
    }
    const GraphDiagnostics d = validate(g);
    CsvTable t{{"i", "degree"}, {}};
    for (int i = 0; i < g.size(); ++i) t.add_row({std::to_string(i), std::to_string(g.degree(i))});
    emit(ctx, t, out,
         {{"connected", d.connected ? "true" : "false"},
          {"bipartite", d.bipartite ? "true" : "false"},
          {"aperiodic", d.aperiodic ? "true" : "false"}});
    return kExitOk;
}

int cmd_propagate(Context& ctx, std::ostream& out) {
    const ResetLaw law = require_law(ctx);
    const TransitionMatrix w(ctx.g());
    const PropagatorSeries series = propagate(w, *ctx.relocation, law, ctx.opt.horizon);
    const int n = w.size();
    std::vector<int> starts;
    if (ctx.opt.start) {
        starts.push_back(require_start(ctx));
    } else {
        for (int i = 0; i < n; ++i) starts.push_back(i);
    }
    CsvTable t{{"t", "i", "j", "p"}, {}};
    for (std::size_t s = 0; s < series.matrices.size(); ++s) {
        for (int i : starts) {
            for (int j = 0; j < n; ++j) {
                t.add_row({std::to_string(s), std::to_string(i), std::to_string(j),
                           format_number(series.matrices[s](i, j))});
            }
        }
    }
    emit(ctx, t, out);
    return kExitOk;
}

int cmd_ness(Context& ctx, std::ostream& out, std::ostream& err) {
    const ResetLaw law = require_law(ctx);
    const TransitionMatrix w(ctx.g());
    const NessResult r = ness(w, *ctx.relocation, law);
    CsvTable t{{"j", "p", "ness_exists"}, {}};
    for (int j = 0; j < w.size(); ++j) {
        t.add_row({std::to_string(j), format_number(r.row(j)), r.exists ? "1" : "0"});
    }
    emit(ctx, t, out);
    if (!r.exists) {
        err << "rwreset: " << law.describe()
            << " has an infinite mean inter-reset time: no NESS, wrote the equilibrium K_j / sum K\n";
        return kExitRegime;
    }
    return kExitOk;
}

int cmd_kemeny_sweep(Context& ctx, std::ostream& out) {
    const std::vector<double> grid = parse_grid(ctx.opt.pgrid);
    const TransitionMatrix w(ctx.g());
    const auto results = parallel_map<KemenyResult>(grid.size(), [&](std::size_t k) { return kemeny(w, grid[k]); });
    CsvTable t{{"p", "kemeny", "efficiency"}, {}};
    for (std::size_t k = 0; k < grid.size(); ++k) {
        t.add_row({format_number(grid[k]), format_number(results[k].kemeny), format_number(results[k].efficiency)});
    }
    emit(ctx, t, out);
    return kExitOk;
}

int cmd_mfpt_sweep(Context& ctx, std::ostream& out) {
    const std::vector<double> grid = parse_grid(ctx.opt.pgrid);
    const TransitionMatrix w(ctx.g());
    const int n = w.size();
    std::vector<std::pair<int, int>> pairs;
    const std::string pair_spec = ctx.opt.pairs.empty() ? "0:" + std::to_string(n - 1) : ctx.opt.pairs;
    for (auto item : split(pair_spec, ',')) {
        const auto ij = split(item, ':');
        if (ij.size() != 2) throw ParseError("--pairs expects i:j[,i:j...]");
        const int i = parse_number<int>(ij[0], "node id");
        const int j = parse_number<int>(ij[1], "node id");
        if (i < 0 || i >= n || j < 0 || j >= n) throw ValidationError("pair node out of range");
        pairs.emplace_back(i, j);
    }
    struct Row {
        KemenyResult k;
        std::vector<double> mfpt;
    };
    const auto rows = parallel_map<Row>(grid.size(), [&](std::size_t k) {
        const Matrix m = mfpt_matrix(w, *ctx.relocation, grid[k]);
        Row r{kemeny(w, grid[k]), {}};
        for (auto [i, j] : pairs) r.mfpt.push_back(m(i, j));
        return r;
    });
    CsvTable t{{"p", "kemeny", "efficiency"}, {}};
    for (auto [i, j] : pairs) t.header.push_back("mfpt_" + std::to_string(i) + "_" + std::to_string(j));
    for (std::size_t k = 0; k < grid.size(); ++k) {
        std::vector<std::string> row{format_number(grid[k]), format_number(rows[k].k.kemeny),
                                     format_number(rows[k].k.efficiency)};
        for (double v : rows[k].mfpt) row.push_back(format_number(v));
        t.add_row(std::move(row));
    }
    emit(ctx, t, out);
    return kExitOk;
}

std::string regime_of(double rho) {
    if (rho < 1.0 - 1e-8) return to_string(ErgodicityClass::ErgodicSufficient);
    if (std::abs(rho - 1.0) <= 1e-8) return to_string(ErgodicityClass::NonErgodicHallmark);
    return to_string(ErgodicityClass::Inconclusive);
}

int cmd_mfht_sweep(Context& ctx, std::ostream& out) {
    const std::vector<double> grid = parse_grid(ctx.opt.agrid);
    const TransitionMatrix w(ctx.g());
    const KilledSystem ks = kill(w, *ctx.relocation, ctx.t_nodes);
    const auto results = parallel_map<MfhtResult>(
        grid.size(), [&](std::size_t k) { return mfht(ks, ResetLaw::sibuya(grid[k])); });
    std::vector<int> starts;
    if (ctx.opt.start) {
        starts.push_back(require_start(ctx));
    } else {
        for (int i = 0; i < w.size(); ++i) starts.push_back(i);
    }
    CsvTable t{{"alpha", "start", "mfht", "global_mfht", "regime"}, {}};
    for (std::size_t k = 0; k < grid.size(); ++k) {
        for (int i : starts) {
            t.add_row({format_number(grid[k]), std::to_string(i), format_number(results[k].per_start(i)),
                       format_number(results[k].global), regime_of(results[k].rho)});
        }
    }
    emit(ctx, t, out);
    return kExitOk;
}

int cmd_survival(Context& ctx, std::ostream& out) {
    const ResetLaw law = require_law(ctx);
    const TransitionMatrix w(ctx.g());
    const KilledSystem ks = kill(w, *ctx.relocation, ctx.t_nodes);
    const HittingStats stats = survival_series(ks, law, ctx.opt.horizon);
    std::vector<int> starts;
    if (ctx.opt.start) {
        starts.push_back(require_start(ctx));
    } else {
        for (int i = 0; i < w.size(); ++i) starts.push_back(i);
    }
    const ErgodicityReport report = ergodicity_check(ks, law);
    const Provenance regime{{"regime", to_string(report.classification)}, {"rho", format_number(report.rho)}};
    CsvTable t{{"i", "t", "survival", "fht_pdf"}, {}};
    for (int i : starts) {
        for (std::int64_t s = 0; s <= stats.horizon(); ++s) {
            t.add_row({std::to_string(i), std::to_string(s), format_number(stats.survival(i, s)),
                       format_number(stats.fht_pdf(i, s))});
        }
    }
    emit(ctx, t, out, regime);
    if (!ctx.opt.summary.empty()) {
        const MfhtResult m = mfht(ks, law);
        const HittingProbability hp = hitting_probability(ks, law, ctx.opt.horizon);
        CsvTable s{{"i", "mfht", "hitting_prob"}, {}};
        for (int i : starts) {
            s.add_row({std::to_string(i), format_number(m.per_start(i)), format_number(hp.probability(i))});
        }
        Provenance p = provenance(ctx);
        p.insert(p.end(), regime.begin(), regime.end());
        p.emplace_back("hitting_status", to_string(hp.status));
        p.emplace_back("global_mfht", format_number(m.global));
        write_csv(ctx.opt.summary, s, p);
    }
    return kExitOk;
}

std::vector<std::string> estimate_row(const std::string& name, const SimEstimate& e) {
    return {name, format_number(e.value), format_number(e.standard_error), std::to_string(e.trials),
            std::to_string(e.censored)};
}

int cmd_simulate(Context& ctx, std::ostream& out) {
    const ResetLaw law = require_law(ctx);
    if (!ctx.opt.targets.empty()) ctx.t_nodes = build_targets(ctx);
    SimConfig cfg{.start = require_start(ctx),
                  .horizon = ctx.opt.horizon,
                  .trials = ctx.opt.trials,
                  .seed = ctx.sim_seed,
                  .law = law,
                  .relocation = *ctx.relocation,
                  .targets = ctx.t_nodes};
    const Simulator sim(ctx.g(), cfg);
    const std::string& stat = ctx.opt.stat;
    if (!ctx.opt.dump.empty()) {
        std::ofstream f(ctx.opt.dump, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open " + ctx.opt.dump + " for writing");
        for (const auto& [key, value] : provenance(ctx)) f << "# " << key << ": " << value << '\n';
        sim.dump(f, std::min(ctx.opt.dump_trials, ctx.opt.trials));
    }
    if (stat == "occupation") {
        const OccupationEstimate e = sim.occupation(ctx.opt.horizon);
        CsvTable t{{"j", "p", "se"}, {}};
        for (int j = 0; j < ctx.g().size(); ++j) {
            t.add_row({std::to_string(j), format_number(e.probability(j)), format_number(e.standard_error(j))});
        }
        emit(ctx, t, out);
        return kExitOk;
    }
    if (stat == "survival") {
        if (ctx.t_nodes.empty()) throw ParseError("--stat survival needs --targets");
        const SurvivalCurve c = sim.survival_curve();
        CsvTable t{{"t", "survival", "se"}, {}};
        for (std::int64_t s = 0; s <= ctx.opt.horizon; ++s) {
            t.add_row({std::to_string(s), format_number(c.survival(s)), format_number(c.standard_error(s))});
        }
        emit(ctx, t, out);
        return kExitOk;
    }
    CsvTable t{{"statistic", "value", "se", "trials", "censored"}, {}};
    if (stat == "mfht") {
        if (ctx.t_nodes.empty()) throw ParseError("--stat mfht needs --targets");
        t.add_row(estimate_row("mfht", sim.mfht()));
    } else if (stat.rfind("mfpt:", 0) == 0) {
        const int target = parse_number<int>(std::string_view(stat).substr(5), "target node");
        t.add_row(estimate_row(stat, sim.mfpt(target)));
    } else if (stat == "reset-rate") {
        t.add_row(estimate_row("reset_rate", sim.reset_rate()));
    } else {
        throw ParseError("unknown --stat '" + stat + "'");
    }
    emit(ctx, t, out);
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Random walks with stochastic resetting on networks"};
    app.set_version_flag("--version", std::string(RWRESET_VERSION));
    app.set_config("--config", "", "Flat key=value file; command-line flags override it");
    app.get_config_formatter_base()->arrayDelimiter('\x1f');
    Options opt;
    app.add_option("--graph", opt.graph, "ws:N,m,pr | ba:N,m | cc:N | edgelist:PATH");
    app.add_option("--seed", opt.seed, "Master seed (graph, r-nodes, t-nodes, simulation)");
    app.add_option("--law", opt.law, "geom:p | sibuya:a | finite:PATH | period:T");
    app.add_option("--reloc", opt.reloc, "uniform:frac | degree:frac | node:i | vec:PATH")->capture_default_str();
    app.add_option("--targets", opt.targets, "set:i,j,... | frac:x");
    app.add_option("--pgrid", opt.pgrid, "Reset probability grid a:b:n")->capture_default_str();
    app.add_option("--agrid", opt.agrid, "Sibuya exponent grid a:b:n")->capture_default_str();
    app.add_option("--out", opt.out, "Output CSV (default: stdout)");
    app.add_option("--trials", opt.trials, "Monte Carlo trajectories")->capture_default_str();
    app.add_option("--horizon", opt.horizon, "Time horizon")->capture_default_str();
    app.add_option("--start", opt.start, "Start node");
    app.add_option("--pairs", opt.pairs, "MFPT pairs i:j[,i:j...] for mfpt-sweep");
    app.add_flag("--emit-edgelist", opt.emit_edgelist, "graph: write the edge list instead of degrees");
    app.add_option("--summary", opt.summary, "survival: also write i,mfht,hitting_prob here");
    app.add_option("--stat", opt.stat, "simulate: occupation | survival | mfht | mfpt:j | reset-rate")
        ->capture_default_str();
    app.add_option("--dump", opt.dump, "simulate: trajectory dump CSV");
    app.add_option("--dump-trials", opt.dump_trials, "simulate: trajectories in the dump")->capture_default_str();

    const std::vector<std::pair<std::string, std::string>> commands{
        {"graph", "Generate or load a graph"},
        {"propagate", "Propagator P(t) of the walk with resetting"},
        {"ness", "Non-equilibrium steady state"},
        {"mfpt-sweep", "MFPT and Kemeny constant over a p-grid (geometric resetting)"},
        {"kemeny-sweep", "Kemeny constant and efficiency over a p-grid"},
        {"mfht-sweep", "Mean first hitting time over a Sibuya alpha-grid"},
        {"survival", "Survival probability and first-hitting PDF"},
        {"simulate", "Monte Carlo estimates"},
    };
    for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();
    app.require_subcommand(1);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << RWRESET_VERSION << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "rwreset: " << e.what() << '\n';
        return kExitConfig;
    }

    Context ctx;
    ctx.opt = opt;
    ctx.command = app.get_subcommands().front()->get_name();
    ctx.graph_seed = opt.seed;
    ctx.reloc_seed = derive_seed(opt.seed, 1);
    ctx.target_seed = derive_seed(opt.seed, 2);
    ctx.sim_seed = derive_seed(opt.seed, 3);
    try {
        if (opt.horizon < (ctx.command == "propagate" ? 0 : 1)) throw ValidationError("--horizon out of range");
        if (opt.trials < 1) throw ValidationError("--trials must be >= 1");
        ctx.graph = build_graph(ctx);
        const std::string& c = ctx.command;
        if (c == "graph") return cmd_graph(ctx, out);
        ctx.relocation = build_relocation(ctx);
        if (c == "propagate") return cmd_propagate(ctx, out);
        if (c == "ness") return cmd_ness(ctx, out, err);
        if (c == "kemeny-sweep") return cmd_kemeny_sweep(ctx, out);
        if (c == "mfpt-sweep") return cmd_mfpt_sweep(ctx, out);
        if (c == "simulate") return cmd_simulate(ctx, out);
        ctx.t_nodes = build_targets(ctx);
        if (c == "mfht-sweep") return cmd_mfht_sweep(ctx, out);
        if (c == "survival") return cmd_survival(ctx, out);
        err << "rwreset: unknown command " << c << '\n';
        return kExitConfig;
    } catch (const RegimeError& e) {
        err << "rwreset: " << e.what() << '\n';
        return kExitRegime;
    } catch (const std::exception& e) {
        err << "rwreset: " << e.what() << '\n';
        return kExitConfig;
    }
}

}  // namespace rwreset::cli
