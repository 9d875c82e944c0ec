#pragma once

#include "rwreset/graph.hpp"
#include "rwreset/renewal.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace rwreset::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRegime = 3;

/// Runs the command line (without the program name). CSV goes to --out or to
/// `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct EdgeListFile {
    std::string path;
};

/// "ws:N,m,pr" | "ba:N,m" | "cc:N" | "edgelist:PATH"
std::variant<GraphModel, EdgeListFile> parse_graph_spec(std::string_view spec);

/// "geom:p" | "sibuya:a" | "finite:PATH" | "period:T"
ResetLaw parse_law(std::string_view spec);

/// "a:b:n": n equally spaced points from a to b inclusive, strictly increasing
/// and inside (0, 1).
std::vector<double> parse_grid(std::string_view spec);

}  // namespace rwreset::cli
