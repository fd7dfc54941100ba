#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "minorient/graph.hpp"

namespace minorient {

/// Text form of a graph:
///
///   # comment
///   graph <name>
///   vertex <id>
///   edge <id> (-- | -> | <- | <->) <id>
///
/// Vertices named in edges are declared implicitly. Errors carry the line
/// and column of the offending token.
struct GraphDocument {
    std::optional<std::string> name;
    MixedGraph graph;
};

GraphDocument parse_graph(std::string_view text);

/// Canonical rendering: optional `graph` line, `vertex` lines for isolated
/// vertices, then one `edge` line per edge in vertex-pair order.
std::string render_graph(const MixedGraph& g, const std::optional<std::string>& name = std::nullopt);
inline std::string render_graph(const GraphDocument& doc) { return render_graph(doc.graph, doc.name); }

/// Square matrix labelled by vertex names, in file order.
struct LabeledMatrix {
    std::vector<std::string> names;
    Eigen::MatrixXd values;
};

/// CSV with a header row of names (an empty leading cell is allowed) and
/// rows `name, v1, ..., vn`. Blank lines and lines starting with '#' are
/// skipped. Entries more than 1e-9 apart in relative terms from their mirror
/// are rejected; the rest are averaged to exact symmetry.
LabeledMatrix parse_matrix(std::string_view text);

std::string render_matrix(const LabeledMatrix& m);

/// Re-index to the graph's vertex order. Throws IndexMismatch unless the
/// name sets agree.
Eigen::MatrixXd align_to(const LabeledMatrix& m, const MixedGraph& g);

/// Back to the given name order.
LabeledMatrix relabel(const Eigen::MatrixXd& in_graph_order, const MixedGraph& g, const std::vector<std::string>& names);

/// Shortest decimal text that reads back to the same double.
std::string format_number(double x);

} // namespace minorient
