#include "minorient/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "minorient/fit.hpp"
#include "minorient/io.hpp"
#include "minorient/oracle.hpp"
#include "minorient/orientation.hpp"
#include "minorient/separation.hpp"

namespace minorient {

using Eigen::Index;

namespace {

constexpr int kUsage = 1;
constexpr int kParse = 2;
constexpr int kPrecondition = 3;
constexpr int kNumerical = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(ErrorKind::ParseError, 0, 0, "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

GraphDocument load_graph(const std::string& path) {
    try {
        return parse_graph(read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(e.kind(), e.line(), e.column(), path + ": " + e.what());
    } catch (const Error& e) {
        throw ParseError(e.kind(), 0, 0, path + ": " + e.what());
    }
}

LabeledMatrix load_matrix(const std::string& path) {
    try {
        return parse_matrix(read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(e.kind(), e.line(), e.column(), path + ": " + e.what());
    }
}

std::vector<std::string> split_names(const std::string& list) {
    std::vector<std::string> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string describe(const MixedGraph& g, const AncestralViolation& v) {
    using Kind = AncestralViolation::Kind;
    switch (v.kind) {
    case Kind::DirectedCycle: {
        Path cycle = v.vertices;
        if (cycle.front() != cycle.back()) cycle.push_back(cycle.front());
        return "directed cycle " + format_path(g, cycle);
    }
    case Kind::ArrowheadAtUndirected:
        return "arrowhead at " + g.name(v.vertices[0]) + " on " + format_edge(g, v.vertices[2], v.vertices[0]) +
               " while " + format_edge(g, v.vertices[0], v.vertices[1]);
    case Kind::BiDirectedAncestor:
        return format_edge(g, v.vertices[0], v.vertices[1]) + " with directed path " +
               format_path(g, Path(v.vertices.begin() + 2, v.vertices.end()));
    }
    return {};
}

std::string names_of(const MixedGraph& g, const std::vector<Vertex>& vs) {
    std::string out;
    for (std::size_t i = 0; i < vs.size(); ++i) out += (i ? "," : "") + g.name(vs[i]);
    return out;
}

nlohmann::json json_names(const MixedGraph& g, const std::vector<Vertex>& vs) {
    auto out = nlohmann::json::array();
    for (Vertex v : vs) out.push_back(g.name(v));
    return out;
}

int cmd_validate(const std::string& path, std::ostream& out) {
    const auto doc = load_graph(path);
    const auto& g = doc.graph;
    out << "vertices: " << g.size() << "\n";
    out << "edges: " << g.edge_count() << "\n";
    out << "bi-directed: " << yes_no(is_bidirected(g)) << "\n";
    const auto anc = is_ancestral(g);
    out << "ancestral: " << yes_no(anc.ancestral);
    if (anc.witness) out << " (" << describe(g, *anc.witness) << ")";
    out << "\n";
    if (!anc.ancestral) {
        out << "maximal: n/a (not ancestral)\n";
    } else if (g.size() > 16) {
        out << "maximal: skipped (more than 16 vertices)\n";
    } else {
        out << "maximal: " << yes_no(is_maximal(g)) << "\n";
    }
    const auto bc = has_boundary_containment(g);
    out << "boundary-containment: " << yes_no(bc.holds);
    if (bc.witness) {
        out << " (" << format_edge(g, bc.witness->first, bc.witness->second) << " violates it)";
    }
    out << "\n";
    return 0;
}

int cmd_simplicial(const std::string& path, std::ostream& out) {
    const auto doc = load_graph(path);
    const auto gs = simplicial_graph(doc.graph);
    out << "# simplicial sets:";
    for (const auto& block : simplicial_blocks(doc.graph)) out << " " << format_set(doc.graph, block);
    out << "\n";
    out << render_graph(gs, doc.name);
    return 0;
}

int cmd_minimize(const std::string& path, const std::string& order, bool all, std::size_t limit, std::ostream& out) {
    const auto doc = load_graph(path);
    const auto& g = doc.graph;
    if (all) {
        const auto gs = all_minimal_orientations(g, limit);
        for (std::size_t i = 0; i < gs.size(); ++i) {
            if (i) out << "\n";
            out << "# minimal orientation " << i + 1 << " of " << gs.size() << "\n";
            out << render_graph(gs[i], doc.name);
        }
        return 0;
    }
    if (!order.empty()) {
        TotalOrder o;
        for (const auto& name : split_names(order)) o.push_back(g.vertex(name));
        out << render_graph(minimally_orient(g, o), doc.name);
    } else {
        out << render_graph(minimally_orient(g), doc.name);
    }
    return 0;
}

int cmd_classify(const std::string& path, const std::string& witness_out, std::ostream& out) {
    const auto doc = load_graph(path);
    const auto& g = doc.graph;
    const auto c = classify(g);
    out << to_string(c.tag) << "\n";
    if (c.witness) {
        out << "# witness\n" << render_graph(*c.witness);
        if (!witness_out.empty()) {
            std::ofstream f(witness_out);
            if (!f) throw Error(ErrorKind::ParseError, "cannot write '" + witness_out + "'");
            f << render_graph(*c.witness, doc.name);
        }
    }
    if (c.obstruction) {
        const auto& o = *c.obstruction;
        Path p{o.x, o.v, o.w, o.y};
        if (o.cycle) p.push_back(o.x);
        out << "# obstruction (" << (o.cycle ? "4-cycle" : "4-chain") << "): " << format_path(g, p) << "\n";
    }
    return 0;
}

int cmd_msep(const std::string& path, const std::string& v, const std::string& w, const std::string& given,
             std::ostream& out) {
    const auto doc = load_graph(path);
    const auto& g = doc.graph;
    const Vertex a = g.vertex(v);
    const Vertex b = g.vertex(w);
    const VertexSet c = g.make_set(split_names(given));
    if (is_m_separated(g, a, b, c)) {
        out << "SEPARATED\n";
        return 0;
    }
    out << "CONNECTED\n";
    if (auto p = find_connecting_path(g, a, b, c)) out << "path: " << format_path(g, p->path) << "\n";
    return 0;
}

int cmd_equiv(const std::string& p1, const std::string& p2, std::size_t limit, std::ostream& out) {
    const auto a = load_graph(p1);
    const auto b = load_graph(p2);
    const auto d = markov_equivalent(a.graph, b.graph, limit);
    out << (d.equivalent ? "EQUIVALENT" : "NOT-EQUIVALENT") << "\n";
    out << "decision: " << to_string(d.path) << "\n";
    return 0;
}

struct FitArgs {
    std::string graph;
    std::string matrix;
    double n = 0;
    std::string via = "gmin";
    double tol = 1e-8;
    std::size_t max_iter = 10000;
    std::size_t multi_start = 0;
    std::uint64_t seed = 0;
    bool json = false;
};

int cmd_fit(const FitArgs& a, std::ostream& out, std::ostream& err) {
    const auto doc = load_graph(a.graph);
    const auto m = load_matrix(a.matrix);
    const auto& g = doc.graph;
    const Eigen::MatrixXd s = align_to(m, g);
    const FitMethod method = a.via == "direct" ? FitMethod::Direct : FitMethod::ViaMinimal;
    FitOptions opts;
    opts.tol = a.tol;
    opts.max_iter = a.max_iter;
    const auto r = fit(method, g, s, a.n, opts);
    std::optional<MultiStartReport> ms;
    if (a.multi_start > 0) ms = fit_multi_start(method, g, s, a.n, a.multi_start, a.seed, opts);

    const auto fitted = relabel(r.sigma_hat, g, m.names);
    if (a.json) {
        nlohmann::json j;
        j["sigma_hat"] = {{"names", fitted.names}, {"values", nlohmann::json::array()}};
        for (Index i = 0; i < fitted.values.rows(); ++i) {
            std::vector<double> row;
            for (Index k = 0; k < fitted.values.cols(); ++k) row.push_back(fitted.values(i, k));
            j["sigma_hat"]["values"].push_back(row);
        }
        j["deviance"] = r.deviance;
        j["df"] = r.df;
        j["p_value"] = r.p_value;
        j["iterations"] = r.iterations;
        j["residual"] = r.residual;
        j["work_report"] = {{"closed_form", json_names(g, r.work.closed_form)},
                            {"once_only", json_names(g, r.work.once_only)},
                            {"iterative", json_names(g, r.work.iterative)},
                            {"regressions_per_cycle", r.work.regressions_per_cycle},
                            {"converged", r.converged},
                            {"loglik", r.loglik}};
        j["order_used"] = json_names(g, r.order_used);
        if (ms) {
            auto optima = nlohmann::json::array();
            for (const auto& o : ms->optima) optima.push_back({{"loglik", o.loglik}, {"hits", o.hits}});
            j["work_report"]["local_optima"] = optima;
        }
        out << j.dump(2) << "\n";
    } else {
        out << render_matrix(fitted);
        out << "# deviance: " << format_number(r.deviance) << "\n";
        out << "# df: " << r.df << "\n";
        out << "# p-value: " << format_number(r.p_value) << "\n";
        out << "# loglik: " << format_number(r.loglik) << "\n";
        out << "# iterations: " << r.iterations << "\n";
        out << "# residual: " << format_number(r.residual) << "\n";
        out << "# converged: " << yes_no(r.converged) << "\n";
        out << "# closed-form: " << names_of(g, r.work.closed_form) << "\n";
        out << "# once-only: " << names_of(g, r.work.once_only) << "\n";
        out << "# iterative: " << names_of(g, r.work.iterative) << "\n";
        out << "# regressions-per-cycle:";
        for (std::size_t k = 0; k < r.work.regressions_per_cycle.size(); ++k) {
            out << (k ? "," : " ") << r.work.regressions_per_cycle[k];
        }
        out << "\n# order: " << names_of(g, r.order_used) << "\n";
        if (ms) {
            out << "# local optima: " << ms->optima.size() << "\n";
            for (std::size_t k = 0; k < ms->optima.size(); ++k) {
                out << "# optimum " << k + 1 << ": loglik " << format_number(ms->optima[k].loglik) << ", hits "
                    << ms->optima[k].hits << "\n";
            }
        }
    }
    if (!r.converged) {
        err << "error: no convergence within " << a.max_iter << " iterations (residual "
            << format_number(r.residual) << ")\n";
        return kNumerical;
    }
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Minimal orientations of bi-directed graphs and Gaussian covariance graph models", "minorient"};
    app.require_subcommand(1);

    std::string graph, graph2, matrix, order, given, witness_out, v, w;
    bool all_orders = false;
    std::size_t limit = 8;
    std::size_t oracle_limit = OracleLimits{}.independence_model;
    FitArgs fa;

    auto* validate = app.add_subcommand("validate", "Report graph class, ancestrality and maximality");
    validate->add_option("graph", graph, "Graph file")->required();

    auto* simplicial = app.add_subcommand("simplicial", "Print the simplicial graph of a bi-directed graph");
    simplicial->add_option("graph", graph, "Graph file")->required();

    auto* minimize = app.add_subcommand("minimize", "Print a minimally oriented graph");
    minimize->add_option("graph", graph, "Graph file")->required();
    auto* order_opt = minimize->add_option("--order", order, "Comma-separated total order of the vertices");
    minimize->add_flag("--all-orders", all_orders, "Print every distinct minimal orientation")->excludes(order_opt);
    minimize->add_option("--limit", limit, "Vertex limit for --all-orders")->capture_default_str();

    auto* cls = app.add_subcommand("classify", "Decide undirected or DAG equivalence");
    cls->add_option("graph", graph, "Graph file")->required();
    cls->add_option("--witness-out", witness_out, "Write the witness graph to this file");

    auto* msep = app.add_subcommand("msep", "Test m-separation of two vertices");
    msep->add_option("graph", graph, "Graph file")->required();
    msep->add_option("v", v, "First vertex")->required();
    msep->add_option("w", w, "Second vertex")->required();
    msep->add_option("--given", given, "Comma-separated conditioning set");

    auto* equiv = app.add_subcommand("equiv", "Test Markov equivalence of two graphs");
    equiv->add_option("graph1", graph, "Graph file")->required();
    equiv->add_option("graph2", graph2, "Graph file")->required();
    equiv->add_option("--oracle-limit", oracle_limit, "Vertex limit for comparing independence models")
        ->capture_default_str();

    auto* fitc = app.add_subcommand("fit", "Maximum likelihood fit of a covariance graph model");
    fitc->add_option("graph", fa.graph, "Bi-directed graph file")->required();
    fitc->add_option("matrix", fa.matrix, "Sample covariance or correlation CSV")->required();
    fitc->add_option("--n", fa.n, "Sample size")->required()->check(CLI::PositiveNumber);
    fitc->add_option("--via", fa.via, "Fitting route")->check(CLI::IsMember({"gmin", "direct"}))->capture_default_str();
    fitc->add_option("--tol", fa.tol, "Convergence tolerance")->check(CLI::PositiveNumber)->capture_default_str();
    fitc->add_option("--max-iter", fa.max_iter, "Iteration cap")->check(CLI::PositiveNumber)->capture_default_str();
    fitc->add_option("--multi-start", fa.multi_start, "Also fit from this many random starts");
    fitc->add_option("--seed", fa.seed, "Seed for random starts")->capture_default_str();
    fitc->add_flag("--json", fa.json, "JSON output");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    if (argv.empty()) argv.push_back("minorient");
    try {
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : kUsage;
    }

    try {
        if (*validate) return cmd_validate(graph, out);
        if (*simplicial) return cmd_simplicial(graph, out);
        if (*minimize) return cmd_minimize(graph, order, all_orders, limit, out);
        if (*cls) return cmd_classify(graph, witness_out, out);
        if (*msep) return cmd_msep(graph, v, w, given, out);
        if (*equiv) return cmd_equiv(graph, graph2, oracle_limit, out);
        if (*fitc) return cmd_fit(fa, out, err);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kParse;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        switch (category(e.kind())) {
        case ErrorCategory::Parse: return kParse;
        case ErrorCategory::Precondition: return kPrecondition;
        case ErrorCategory::Numerical: return kNumerical;
        }
    }
    return kUsage;
}

} // namespace minorient
