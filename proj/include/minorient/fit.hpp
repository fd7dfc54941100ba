#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "minorient/gaussian.hpp"
#include "minorient/orientation.hpp"

namespace minorient {

struct FitOptions {
    /// Must lie in the model cone of the graph; identity when unset.
    std::optional<Eigen::MatrixXd> start;
    double tol = 1e-8;
    std::size_t max_iter = 10000;
};

/// Which vertices were handled how, and how many regressions each cycle ran.
struct WorkReport {
    std::vector<Vertex> closed_form; // covered by a simplicial block, copied from S
    std::vector<Vertex> once_only;   // no spouse in G^min: one regression on the parents
    std::vector<Vertex> iterative;   // updated every cycle
    std::vector<std::size_t> regressions_per_cycle;
};

struct FitResult {
    Eigen::MatrixXd sigma_hat;
    /// Number of update cycles over the iteratively fitted vertices.
    std::size_t iterations = 0;
    double residual = 0;
    double loglik = 0;
    double deviance = 0;
    std::size_t df = 0;
    double p_value = 1;
    bool converged = false;
    /// Log-likelihood after each cycle.
    std::vector<double> loglik_trace;
    WorkReport work;
    /// Update order for the direct fitter; the boundary order behind G^min
    /// for the fitter on the minimally oriented graph.
    TotalOrder order_used;
};

/// Iterative conditional fitting on the bi-directed graph: each step
/// regresses one variable on the pseudo-variables of its neighbours with
/// every other entry held fixed. Stops when both the likelihood-equation
/// residual and the largest entry change drop to `tol`; on running out of
/// iterations the last iterate is returned with `converged == false`.
FitResult fit_direct(const MixedGraph& g, const Eigen::MatrixXd& s, double n, const FitOptions& opts = {});

/// Fits through the minimally oriented graph: simplicial blocks are copied
/// from S, vertices without spouses get one regression on their parents,
/// and only vertices with a bi-directed edge are iterated (residual
/// iterative conditional fitting in the (Λ, B, Ω) parametrization).
FitResult fit_via_gmin(const MixedGraph& g, const Eigen::MatrixXd& s, double n, const FitOptions& opts = {});

enum class FitMethod { Direct, ViaMinimal };

FitResult fit(FitMethod method, const MixedGraph& g, const Eigen::MatrixXd& s, double n, const FitOptions& opts = {});

struct LocalOptimum {
    double loglik;
    double residual;
    Eigen::MatrixXd sigma_hat;
    std::size_t hits;
};

struct MultiStartReport {
    std::vector<FitResult> runs;
    /// Converged runs grouped by log-likelihood (1e-6), best first.
    std::vector<LocalOptimum> optima;
};

/// Random start in the model cone: a seeded perturbation of the identity on
/// the edges of G, rescaled per variable.
Eigen::MatrixXd random_start(const MixedGraph& g, std::uint64_t seed);

MultiStartReport fit_multi_start(FitMethod method, const MixedGraph& g, const Eigen::MatrixXd& s, double n,
                                 std::size_t starts, std::uint64_t seed, const FitOptions& opts = {});

} // namespace minorient
