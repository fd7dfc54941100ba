#include "minorient/io.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace minorient {

using Eigen::Index;

namespace {

struct Token {
    std::string_view text;
    std::size_t column; // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        if (i >= line.size() || line[i] == '#') break;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '#') ++i;
        out.push_back({line.substr(start, i - start), start + 1});
    }
    return out;
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            if (start < text.size()) lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    return lines;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

} // namespace

GraphDocument parse_graph(std::string_view text) {
    GraphDocument doc;
    std::set<std::string> vertices;
    struct Located {
        EdgeSpec spec;
        std::size_t line;
        std::size_t column;
    };
    std::vector<Located> edges;

    const auto lines = split_lines(text);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        const auto tokens = tokenize(lines[ln]);
        if (tokens.empty()) continue;
        const std::size_t line_no = ln + 1;
        auto fail = [&](const Token& at, const std::string& msg) -> ParseError {
            return ParseError(ErrorKind::ParseError, line_no, at.column, msg);
        };
        auto expect_count = [&](std::size_t n, const char* usage) {
            if (tokens.size() < n) {
                const auto& last = tokens.back();
                throw ParseError(ErrorKind::ParseError, line_no, last.column + last.text.size(),
                                 std::string("expected ") + usage);
            }
            if (tokens.size() > n) throw fail(tokens[n], std::string("unexpected token; expected ") + usage);
        };
        auto identifier = [&](const Token& t) {
            if (!is_valid_token(t.text)) throw fail(t, "invalid vertex name '" + std::string(t.text) + "'");
            return std::string(t.text);
        };

        const std::string_view keyword = tokens[0].text;
        if (keyword == "graph") {
            expect_count(2, "graph <name>");
            if (doc.name) throw fail(tokens[0], "graph name given twice");
            doc.name = identifier(tokens[1]);
        } else if (keyword == "vertex") {
            expect_count(2, "vertex <id>");
            vertices.insert(identifier(tokens[1]));
        } else if (keyword == "edge") {
            expect_count(4, "edge <id> <mark> <id>");
            std::string a = identifier(tokens[1]);
            std::string b = identifier(tokens[3]);
            const std::string_view op = tokens[2].text;
            EdgeSpec spec;
            if (op == "<->") spec = {a, EdgeType::BiDirected, b};
            else if (op == "->") spec = {a, EdgeType::Directed, b};
            else if (op == "<-") spec = {b, EdgeType::Directed, a};
            else if (op == "--") spec = {a, EdgeType::Undirected, b};
            else throw fail(tokens[2], "unknown edge mark '" + std::string(op) + "'; expected --, ->, <- or <->");
            if (a == b) throw ParseError(ErrorKind::SelfEdge, line_no, tokens[1].column, "edge from '" + a + "' to itself");
            edges.push_back({std::move(spec), line_no, tokens[0].column});
        } else {
            throw fail(tokens[0], "unknown statement '" + std::string(keyword) + "'");
        }
    }

    // Conflicts are reported at the second declaration of a pair.
    std::map<std::pair<std::string, std::string>, EdgeSpec> seen;
    std::vector<EdgeSpec> specs;
    for (const auto& e : edges) {
        vertices.insert(e.spec.from);
        vertices.insert(e.spec.to);
        auto key = std::minmax(e.spec.from, e.spec.to);
        auto [it, inserted] = seen.emplace(std::pair{key.first, key.second}, e.spec);
        if (!inserted) {
            const auto& prev = it->second;
            const bool same = prev.type == e.spec.type &&
                              ((prev.from == e.spec.from && prev.to == e.spec.to) ||
                               (e.spec.type != EdgeType::Directed && prev.from == e.spec.to && prev.to == e.spec.from));
            if (!same) {
                throw ParseError(ErrorKind::ConflictingMarks, e.line, e.column,
                                 "pair {" + key.first + "," + key.second + "} already has a different edge");
            }
            continue;
        }
        specs.push_back(e.spec);
    }
    doc.graph = MixedGraph::build(std::vector<std::string>(vertices.begin(), vertices.end()), specs);
    return doc;
}

std::string render_graph(const MixedGraph& g, const std::optional<std::string>& name) {
    std::string out;
    if (name) out += "graph " + *name + "\n";
    for (Vertex v = 0; v < g.size(); ++v) {
        if (g.neighbors(v).empty()) out += "vertex " + g.name(v) + "\n";
    }
    for (const auto& e : g.edges()) out += "edge " + format_edge(g, e.u, e.v) + "\n";
    return out;
}

std::string format_number(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc{}) return std::to_string(x);
    return std::string(buf, end);
}

LabeledMatrix parse_matrix(std::string_view text) {
    struct Row {
        std::vector<std::string_view> cells;
        std::size_t line;
    };
    std::vector<Row> rows;
    const auto lines = split_lines(text);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        const auto line = trim(lines[ln]);
        if (line.empty() || line.front() == '#') continue;
        Row row{{}, ln + 1};
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            row.cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(ErrorKind::ParseError, 1, 1, "empty matrix document");

    auto header = rows.front().cells;
    if (!header.empty() && header.front().empty()) header.erase(header.begin());
    LabeledMatrix m;
    std::set<std::string> unique;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (!is_valid_token(header[i])) {
            throw ParseError(ErrorKind::ParseError, rows.front().line, i + 1,
                             "invalid variable name '" + std::string(header[i]) + "'");
        }
        if (!unique.insert(std::string(header[i])).second) {
            throw ParseError(ErrorKind::ParseError, rows.front().line, i + 1,
                             "variable '" + std::string(header[i]) + "' named twice");
        }
        m.names.emplace_back(header[i]);
    }
    const std::size_t p = m.names.size();
    if (rows.size() - 1 != p) {
        throw ParseError(ErrorKind::RaggedRows, rows.back().line, 1,
                         "expected " + std::to_string(p) + " data rows, found " + std::to_string(rows.size() - 1));
    }
    m.values.resize(Index(p), Index(p));
    for (std::size_t i = 0; i < p; ++i) {
        const auto& row = rows[i + 1];
        if (row.cells.size() != p + 1) {
            throw ParseError(ErrorKind::RaggedRows, row.line, 1,
                             "expected " + std::to_string(p + 1) + " cells, found " + std::to_string(row.cells.size()));
        }
        if (row.cells[0] != m.names[i]) {
            throw ParseError(ErrorKind::ParseError, row.line, 1,
                             "row " + std::to_string(i + 1) + " is labelled '" + std::string(row.cells[0]) +
                                 "', expected '" + m.names[i] + "'");
        }
        for (std::size_t j = 0; j < p; ++j) {
            const auto cell = row.cells[j + 1];
            double value = 0;
            auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
            if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(value)) {
                throw ParseError(ErrorKind::ParseError, row.line, j + 2, "not a number: '" + std::string(cell) + "'");
            }
            m.values(Index(i), Index(j)) = value;
        }
    }

    double worst = 0;
    std::size_t wi = 0, wj = 0;
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i + 1; j < p; ++j) {
            const double a = m.values(Index(i), Index(j));
            const double b = m.values(Index(j), Index(i));
            const double rel = std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
            if (rel > worst) {
                worst = rel;
                wi = i;
                wj = j;
            }
        }
    }
    if (worst > 1e-9) {
        throw ParseError(ErrorKind::AsymmetricMatrix, rows[wi + 1].line, wj + 2,
                         "matrix is not symmetric; worst cell (" + m.names[wi] + ", " + m.names[wj] + ") = " +
                             format_number(m.values(Index(wi), Index(wj))) + " vs " +
                             format_number(m.values(Index(wj), Index(wi))));
    }
    const Eigen::MatrixXd sym = (m.values + m.values.transpose()) / 2.0;
    m.values = sym;
    return m;
}

std::string render_matrix(const LabeledMatrix& m) {
    std::string out;
    for (std::size_t j = 0; j < m.names.size(); ++j) out += (j ? "," : "") + m.names[j];
    out += "\n";
    for (std::size_t i = 0; i < m.names.size(); ++i) {
        out += m.names[i];
        for (std::size_t j = 0; j < m.names.size(); ++j) out += "," + format_number(m.values(Index(i), Index(j)));
        out += "\n";
    }
    return out;
}

Eigen::MatrixXd align_to(const LabeledMatrix& m, const MixedGraph& g) {
    if (m.names.size() != g.size()) {
        throw Error(ErrorKind::IndexMismatch, "matrix has " + std::to_string(m.names.size()) + " variables, graph has " +
                                                  std::to_string(g.size()) + " vertices");
    }
    std::vector<Vertex> to_graph(m.names.size());
    for (std::size_t i = 0; i < m.names.size(); ++i) {
        auto v = g.find(m.names[i]);
        if (!v) throw Error(ErrorKind::IndexMismatch, "matrix variable '" + m.names[i] + "' is not a graph vertex");
        to_graph[i] = *v;
    }
    Eigen::MatrixXd out(Index(g.size()), Index(g.size()));
    for (std::size_t i = 0; i < m.names.size(); ++i) {
        for (std::size_t j = 0; j < m.names.size(); ++j) {
            out(Index(to_graph[i]), Index(to_graph[j])) = m.values(Index(i), Index(j));
        }
    }
    return out;
}

LabeledMatrix relabel(const Eigen::MatrixXd& in_graph_order, const MixedGraph& g, const std::vector<std::string>& names) {
    LabeledMatrix out{names, Eigen::MatrixXd(Index(names.size()), Index(names.size()))};
    std::vector<Vertex> idx;
    for (const auto& n : names) idx.push_back(g.vertex(n));
    for (std::size_t i = 0; i < names.size(); ++i) {
        for (std::size_t j = 0; j < names.size(); ++j) {
            out.values(Index(i), Index(j)) = in_graph_order(Index(idx[i]), Index(idx[j]));
        }
    }
    return out;
}

} // namespace minorient
