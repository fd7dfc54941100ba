#include "minorient/fit.hpp"

#include <algorithm>
#include <random>

#include <Eigen/Eigenvalues>

namespace minorient {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

void validate_inputs(const MixedGraph& g, const MatrixXd& s, double n, const FitOptions& opts) {
    detail::check_square(s.rows(), s.cols(), g.size(), "S");
    if (!(n >= 1)) throw Error(ErrorKind::IndexMismatch, "sample size must be at least 1");
    if (!(opts.tol > 0)) throw Error(ErrorKind::IndexMismatch, "tolerance must be positive");
    for (Index i = 0; i < s.rows(); ++i) {
        for (Index j = i + 1; j < s.cols(); ++j) {
            const double scale = std::max({1.0, std::abs(s(i, j)), std::abs(s(j, i))});
            if (std::abs(s(i, j) - s(j, i)) > 1e-12 * scale) {
                throw Error(ErrorKind::AsymmetricMatrix, "S is not symmetric");
            }
        }
    }
    detail::cholesky<double>(s, "S");
    if (opts.start && !in_model_cone(g, *opts.start)) {
        throw Error(ErrorKind::NotInModelCone, "start value must be positive definite with the graph's zero pattern");
    }
}

std::vector<Vertex> all_but(std::size_t n, Vertex v) {
    std::vector<Vertex> out;
    out.reserve(n - 1);
    for (Vertex u = 0; u < n; ++u) {
        if (u != v) out.push_back(u);
    }
    return out;
}

/// Positions of `subset` members inside `within` (both sorted).
std::vector<Index> positions(const std::vector<Vertex>& within, const std::vector<Vertex>& subset) {
    std::vector<Index> out;
    out.reserve(subset.size());
    for (Vertex v : subset) {
        out.push_back(Index(std::lower_bound(within.begin(), within.end(), v) - within.begin()));
    }
    return out;
}

MatrixXd pick(const MatrixXd& m, const std::vector<Index>& rows, const std::vector<Index>& cols) {
    MatrixXd out(Index(rows.size()), Index(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) out(Index(i), Index(j)) = m(rows[i], cols[j]);
    }
    return out;
}

MatrixXd inverse_pd(const MatrixXd& m, const char* what) {
    return detail::cholesky<double>(m, what).solve(MatrixXd::Identity(m.rows(), m.cols()));
}

double max_abs_diff(const MatrixXd& a, const MatrixXd& b) {
    return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

void finish(FitResult& r, const MixedGraph& g, const MatrixXd& s, double n) {
    r.loglik = log_likelihood<double>(r.sigma_hat, s, n);
    const auto test = deviance<double>(r.sigma_hat, s, n, g);
    r.deviance = test.deviance;
    r.df = test.df;
    r.p_value = test.p_value;
}

/// One conditional-fitting step for vertex v of the bi-directed graph.
void icf_update(MatrixXd& sigma, const MatrixXd& s, Vertex v, const std::vector<Vertex>& spouse) {
    const Index iv = Index(v);
    if (spouse.empty()) {
        sigma.row(iv).setZero();
        sigma.col(iv).setZero();
        sigma(iv, iv) = s(iv, iv);
        return;
    }
    const auto others = all_but(std::size_t(sigma.rows()), v);
    const std::vector<Vertex> self{v};
    const MatrixXd a = inverse_pd(detail::submatrix<double>(sigma, others, others), "Sigma without one variable");
    const MatrixXd s_oo = detail::submatrix<double>(s, others, others);
    const VectorXd s_ov = detail::submatrix<double>(s, others, self).col(0);

    const auto sp = positions(others, spouse);
    std::vector<Index> one{0};
    const MatrixXd asa = a * s_oo * a;
    const MatrixXd normal = pick(asa, sp, sp);
    const VectorXd rhs = pick(MatrixXd(a * s_ov), sp, one).col(0);
    const VectorXd beta = detail::cholesky<double>(normal, "pseudo-variable Gram matrix").solve(rhs);
    const double lambda = s(iv, iv) - beta.dot(rhs);
    const double variance = lambda + beta.dot(pick(a, sp, sp) * beta);

    sigma.row(iv).setZero();
    sigma.col(iv).setZero();
    for (std::size_t k = 0; k < spouse.size(); ++k) {
        sigma(iv, Index(spouse[k])) = beta(Index(k));
        sigma(Index(spouse[k]), iv) = beta(Index(k));
    }
    sigma(iv, iv) = variance;
}

/// Non-adjacent entries of G become exact zeros; the rest is symmetrised.
void impose_pattern(MatrixXd& sigma, const MixedGraph& g) {
    for (Vertex v = 0; v < g.size(); ++v) {
        for (Vertex w = v + 1; w < g.size(); ++w) {
            if (g.adjacent(v, w)) {
                const double mid = 0.5 * (sigma(Index(v), Index(w)) + sigma(Index(w), Index(v)));
                sigma(Index(v), Index(w)) = sigma(Index(w), Index(v)) = mid;
            } else {
                sigma(Index(v), Index(w)) = sigma(Index(w), Index(v)) = 0.0;
            }
        }
    }
}

} // namespace

FitResult fit_direct(const MixedGraph& g, const MatrixXd& s, double n, const FitOptions& opts) {
    if (!is_bidirected(g)) throw Error(ErrorKind::NotBiDirected, "covariance graph models need a bi-directed graph");
    validate_inputs(g, s, n, opts);
    const std::size_t p = g.size();

    FitResult r;
    r.sigma_hat = opts.start ? *opts.start : MatrixXd::Identity(Index(p), Index(p));
    r.order_used.resize(p);
    for (Vertex v = 0; v < p; ++v) {
        r.order_used[v] = v;
        r.work.iterative.push_back(v);
    }
    if (p == 0) {
        r.converged = true;
        finish(r, g, s, n);
        return r;
    }

    for (std::size_t cycle = 1; cycle <= opts.max_iter; ++cycle) {
        const MatrixXd previous = r.sigma_hat;
        for (Vertex v = 0; v < p; ++v) icf_update(r.sigma_hat, s, v, spouses(g, v));
        r.iterations = cycle;
        r.work.regressions_per_cycle.push_back(p);
        r.loglik_trace.push_back(log_likelihood<double>(r.sigma_hat, s, n));
        r.residual = likelihood_residual<double>(g, r.sigma_hat, s);
        if (r.residual <= opts.tol && max_abs_diff(r.sigma_hat, previous) < opts.tol) {
            r.converged = true;
            break;
        }
    }
    finish(r, g, s, n);
    return r;
}

FitResult fit_via_gmin(const MixedGraph& g, const MatrixXd& s, double n, const FitOptions& opts) {
    if (!is_bidirected(g)) throw Error(ErrorKind::NotBiDirected, "covariance graph models need a bi-directed graph");
    validate_inputs(g, s, n, opts);
    const std::size_t p = g.size();

    FitResult r;
    r.order_used = boundary_order(g);
    const MixedGraph gmin = minimally_orient(g, r.order_used);
    const MatrixXd start = opts.start ? *opts.start : MatrixXd::Identity(Index(p), Index(p));
    AncestralParams<double> params = extract_params<double>(start, gmin);
    const auto& un = params.undirected;
    const auto& rest = params.arrowhead;

    // Simplicial blocks: Λ⁻¹ restricted to each block is S restricted to it.
    r.work.closed_form = un;
    if (!un.empty()) {
        MatrixXd cov = MatrixXd::Zero(Index(un.size()), Index(un.size()));
        for (const auto& block : simplicial_blocks(g)) {
            const auto at = positions(un, members(block));
            for (auto i : at) {
                for (auto j : at) cov(i, j) = s(Index(un[std::size_t(i)]), Index(un[std::size_t(j)]));
            }
        }
        params.lambda = inverse_pd(cov, "simplicial block of S");
        for (Index i = 0; i < params.lambda.rows(); ++i) {
            for (Index j = 0; j < params.lambda.cols(); ++j) {
                if (i != j && gmin.mark(un[std::size_t(i)], un[std::size_t(j)]) != Mark::Line) params.lambda(i, j) = 0.0;
            }
        }
        params.lambda = ((params.lambda + params.lambda.transpose()) / 2.0).eval();
    }

    std::vector<std::vector<Vertex>> pa(p), sp(p);
    for (Vertex v : rest) {
        pa[v] = parents(gmin, v);
        sp[v] = spouses(gmin, v);
        (sp[v].empty() ? r.work.once_only : r.work.iterative).push_back(v);
    }

    // Regress v on its parents and on the spouses' pseudo-variables
    // Ω_{-v,-v}⁻¹ ε_{-v}, where ε = (I - B) X are the current residuals.
    auto update = [&](Vertex v) {
        const Index iv = Index(v);
        const Index local = Index(std::lower_bound(rest.begin(), rest.end(), v) - rest.begin());
        std::vector<Vertex> others;
        for (Vertex u : rest) {
            if (u != v) others.push_back(u);
        }
        const auto other_pos = positions(rest, others);
        const auto sp_in_others = positions(others, sp[v]);

        MatrixXd omega_oo_inv(0, 0);
        const Index k_pa = Index(pa[v].size());
        const Index k_sp = Index(sp[v].size());
        MatrixXd design = MatrixXd::Zero(k_pa + k_sp, Index(p));
        for (Index i = 0; i < k_pa; ++i) design(i, Index(pa[v][std::size_t(i)])) = 1.0;
        if (k_sp > 0) {
            omega_oo_inv = inverse_pd(pick(params.omega, other_pos, other_pos), "Omega without one variable");
            MatrixXd residual_rows(Index(others.size()), Index(p));
            const MatrixXd ib = MatrixXd::Identity(Index(p), Index(p)) - params.b;
            for (std::size_t i = 0; i < others.size(); ++i) residual_rows.row(Index(i)) = ib.row(Index(others[i]));
            const MatrixXd pseudo = omega_oo_inv * residual_rows;
            for (Index i = 0; i < k_sp; ++i) design.row(k_pa + i) = pseudo.row(sp_in_others[std::size_t(i)]);
        }
        const MatrixXd gram = design * s * design.transpose();
        const VectorXd rhs = design * s.col(iv);
        const VectorXd coef = detail::cholesky<double>(gram, "regression Gram matrix").solve(rhs);
        const double rss = s(iv, iv) - coef.dot(rhs);

        params.b.row(iv).setZero();
        for (Index i = 0; i < k_pa; ++i) params.b(iv, Index(pa[v][std::size_t(i)])) = coef(i);
        params.omega.row(local).setZero();
        params.omega.col(local).setZero();
        double explained = 0;
        if (k_sp > 0) {
            const VectorXd w = coef.tail(k_sp);
            for (Index i = 0; i < k_sp; ++i) {
                const Index o = other_pos[std::size_t(sp_in_others[std::size_t(i)])];
                params.omega(local, o) = params.omega(o, local) = w(i);
            }
            explained = w.dot(pick(omega_oo_inv, sp_in_others, sp_in_others) * w);
        }
        params.omega(local, local) = rss + explained;
    };

    auto current_sigma = [&]() {
        MatrixXd sigma = sigma_from_params(params, gmin);
        impose_pattern(sigma, g);
        return sigma;
    };

    for (Vertex v : r.work.once_only) update(v);
    r.sigma_hat = current_sigma();

    if (r.work.iterative.empty()) {
        r.residual = likelihood_residual<double>(g, r.sigma_hat, s);
        r.loglik_trace.push_back(log_likelihood<double>(r.sigma_hat, s, n));
        r.converged = r.residual <= opts.tol;
        finish(r, g, s, n);
        return r;
    }

    for (std::size_t cycle = 1; cycle <= opts.max_iter; ++cycle) {
        const MatrixXd previous = r.sigma_hat;
        for (Vertex v : r.work.iterative) update(v);
        r.sigma_hat = current_sigma();
        r.iterations = cycle;
        r.work.regressions_per_cycle.push_back(r.work.iterative.size() + (cycle == 1 ? r.work.once_only.size() : 0));
        r.loglik_trace.push_back(log_likelihood<double>(r.sigma_hat, s, n));
        r.residual = likelihood_residual<double>(g, r.sigma_hat, s);
        if (r.residual <= opts.tol && max_abs_diff(r.sigma_hat, previous) < opts.tol) {
            r.converged = true;
            break;
        }
    }
    finish(r, g, s, n);
    return r;
}

FitResult fit(FitMethod method, const MixedGraph& g, const MatrixXd& s, double n, const FitOptions& opts) {
    return method == FitMethod::Direct ? fit_direct(g, s, n, opts) : fit_via_gmin(g, s, n, opts);
}

MatrixXd random_start(const MixedGraph& g, std::uint64_t seed) {
    const Index p = Index(g.size());
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> offdiag(-1.0, 1.0);
    std::uniform_real_distribution<double> log_scale(std::log(0.5), std::log(2.0));

    MatrixXd e = MatrixXd::Zero(p, p);
    for (const auto& edge : g.edges()) {
        e(Index(edge.u), Index(edge.v)) = e(Index(edge.v), Index(edge.u)) = offdiag(rng);
    }
    if (p > 0) {
        const double radius = Eigen::SelfAdjointEigenSolver<MatrixXd>(e, Eigen::EigenvaluesOnly)
                                  .eigenvalues()
                                  .cwiseAbs()
                                  .maxCoeff();
        if (radius > 0.5) e *= 0.5 / radius;
    }
    VectorXd scale(p);
    for (Index i = 0; i < p; ++i) scale(i) = std::exp(0.5 * log_scale(rng));
    MatrixXd start = scale.asDiagonal() * (MatrixXd::Identity(p, p) + e) * scale.asDiagonal();
    impose_pattern(start, g);
    return start;
}

MultiStartReport fit_multi_start(FitMethod method, const MixedGraph& g, const MatrixXd& s, double n,
                                 std::size_t starts, std::uint64_t seed, const FitOptions& opts) {
    MultiStartReport report;
    std::mt19937_64 seeds(seed);
    for (std::size_t k = 0; k < starts; ++k) {
        FitOptions run = opts;
        run.start = random_start(g, seeds());
        report.runs.push_back(fit(method, g, s, n, run));
    }

    std::vector<const FitResult*> ok;
    for (const auto& run : report.runs) {
        if (run.converged) ok.push_back(&run);
    }
    std::sort(ok.begin(), ok.end(), [](const FitResult* a, const FitResult* b) { return a->loglik > b->loglik; });
    for (const FitResult* run : ok) {
        if (!report.optima.empty() && std::abs(report.optima.back().loglik - run->loglik) <= 1e-6) {
            ++report.optima.back().hits;
            continue;
        }
        report.optima.push_back({run->loglik, run->residual, run->sigma_hat, 1});
    }
    return report;
}

} // namespace minorient
