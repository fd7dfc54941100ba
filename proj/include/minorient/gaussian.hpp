#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <boost/math/special_functions/gamma.hpp>

#include "minorient/graph.hpp"

namespace minorient {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Eigen::Index;

namespace detail {

template <typename Scalar>
Eigen::LLT<Matrix<Scalar>> cholesky(const Matrix<Scalar>& m, const char* what) {
    Eigen::LLT<Matrix<Scalar>> llt(m);
    if (m.rows() != m.cols() || llt.info() != Eigen::Success) {
        throw Error(ErrorKind::NotPositiveDefinite, std::string(what) + " is not positive definite");
    }
    // LLT only looks at the lower triangle; a non-positive pivot can slip
    // through for near-singular input.
    const auto diag = llt.matrixLLT().diagonal();
    if (diag.size() > 0 && !(diag.minCoeff() > Scalar(0))) {
        throw Error(ErrorKind::NotPositiveDefinite, std::string(what) + " is not positive definite");
    }
    return llt;
}

template <typename Scalar>
Scalar log_det(const Eigen::LLT<Matrix<Scalar>>& llt) {
    return Scalar(2) * llt.matrixLLT().diagonal().array().log().sum();
}

template <typename Scalar>
Matrix<Scalar> submatrix(const Matrix<Scalar>& m, const std::vector<Vertex>& rows, const std::vector<Vertex>& cols) {
    Matrix<Scalar> out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
            out(static_cast<Index>(i), static_cast<Index>(j)) = m(static_cast<Index>(rows[i]), static_cast<Index>(cols[j]));
        }
    }
    return out;
}

inline void check_square(Index rows, Index cols, std::size_t expected, const char* what) {
    if (rows != cols || static_cast<std::size_t>(rows) != expected) {
        throw Error(ErrorKind::IndexMismatch, std::string(what) + " must be " + std::to_string(expected) + "x" +
                                                  std::to_string(expected));
    }
}

} // namespace detail

/// Gaussian log-likelihood of a centred normal sample of size n with
/// empirical covariance S, evaluated at Σ.
template <typename Scalar>
Scalar log_likelihood(const Matrix<Scalar>& sigma, const Matrix<Scalar>& s, Scalar n) {
    detail::check_square(sigma.rows(), sigma.cols(), static_cast<std::size_t>(s.rows()), "Sigma");
    detail::check_square(s.rows(), s.cols(), static_cast<std::size_t>(sigma.rows()), "S");
    const auto llt = detail::cholesky(sigma, "Sigma");
    const Scalar p = static_cast<Scalar>(sigma.rows());
    const Scalar trace = llt.solve(s).trace();
    const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
    using std::log;
    return -n * p / Scalar(2) * log(two_pi) - n / Scalar(2) * detail::log_det(llt) - n / Scalar(2) * trace;
}

/// Σ is positive definite and exactly zero on every non-adjacent pair of G.
template <typename Scalar>
bool in_model_cone(const MixedGraph& g, const Matrix<Scalar>& sigma) {
    if (sigma.rows() != sigma.cols() || static_cast<std::size_t>(sigma.rows()) != g.size()) return false;
    for (Vertex v = 0; v < g.size(); ++v) {
        for (Vertex w = 0; w < g.size(); ++w) {
            if (v != w && !g.adjacent(v, w) && sigma(Index(v), Index(w)) != Scalar(0)) return false;
            if (sigma(Index(v), Index(w)) != sigma(Index(w), Index(v))) return false;
        }
    }
    Eigen::LLT<Matrix<Scalar>> llt(sigma);
    return llt.info() == Eigen::Success && (g.size() == 0 || llt.matrixLLT().diagonal().minCoeff() > Scalar(0));
}

/// Largest violation of the likelihood equations
///   (Σ⁻¹)_vw = (Σ⁻¹ S Σ⁻¹)_vw   for v = w or v <-> w in G.
template <typename Scalar>
Scalar likelihood_residual(const MixedGraph& g, const Matrix<Scalar>& sigma, const Matrix<Scalar>& s) {
    detail::check_square(sigma.rows(), sigma.cols(), g.size(), "Sigma");
    detail::check_square(s.rows(), s.cols(), g.size(), "S");
    for (Vertex v = 0; v < g.size(); ++v) {
        for (Vertex w = v + 1; w < g.size(); ++w) {
            if (!g.adjacent(v, w) && (sigma(Index(v), Index(w)) != Scalar(0) || sigma(Index(w), Index(v)) != Scalar(0))) {
                throw Error(ErrorKind::NotInModelCone,
                            "Sigma is non-zero at non-adjacent pair (" + g.name(v) + ", " + g.name(w) + ")");
            }
        }
    }
    const auto llt = detail::cholesky(sigma, "Sigma");
    const Matrix<Scalar> k = llt.solve(Matrix<Scalar>::Identity(sigma.rows(), sigma.cols()));
    const Matrix<Scalar> r = k - k * s * k;
    Scalar worst(0);
    using std::abs;
    for (Vertex v = 0; v < g.size(); ++v) {
        worst = std::max(worst, abs(r(Index(v), Index(v))));
        for (Vertex w : g.neighbors(v)) worst = std::max(worst, abs(r(Index(v), Index(w))));
    }
    return worst;
}

template <typename Scalar>
struct Regression {
    Vector<Scalar> coefficients; // aligned with the conditioning set
    Scalar conditional_variance;
};

/// Coefficients Σ_{v,P} Σ_{P,P}⁻¹ and conditional variance
/// Σ_vv - Σ_{v,P} Σ_{P,P}⁻¹ Σ_{P,v} of v given P.
template <typename Scalar>
Regression<Scalar> regression_quantities(const Matrix<Scalar>& sigma, Vertex v, const std::vector<Vertex>& given) {
    if (sigma.rows() != sigma.cols() || Index(v) >= sigma.rows()) {
        throw Error(ErrorKind::IndexMismatch, "regression target outside the matrix");
    }
    for (Vertex p : given) {
        if (Index(p) >= sigma.rows() || p == v) {
            throw Error(ErrorKind::IndexMismatch, "conditioning set must lie in the matrix and exclude the target");
        }
    }
    if (given.empty()) return {Vector<Scalar>(0), sigma(Index(v), Index(v))};
    const Matrix<Scalar> spp = detail::submatrix(sigma, given, given);
    const Vector<Scalar> spv = detail::submatrix(sigma, given, {v}).col(0);
    const auto llt = detail::cholesky(spp, "conditioning block");
    Vector<Scalar> beta = llt.solve(spv);
    const Scalar var = sigma(Index(v), Index(v)) - spv.dot(beta);
    return {std::move(beta), var};
}

/// Parameters of a Gaussian ancestral graph model.
///   undirected: vertices whose every edge has a tail there (un_G)
///   lambda:     precision over `undirected`, support: diagonal and v - w
///   omega:      covariance over `arrowhead`, support: diagonal and v <-> w
///   b:          |V|x|V| coefficients, b(v, w) != 0 only if w -> v
template <typename Scalar>
struct AncestralParams {
    std::vector<Vertex> undirected;
    std::vector<Vertex> arrowhead;
    Matrix<Scalar> lambda;
    Matrix<Scalar> omega;
    Matrix<Scalar> b;
};

/// Partition of the vertices into un_G and its complement.
inline std::pair<std::vector<Vertex>, std::vector<Vertex>> tail_partition(const MixedGraph& g) {
    std::vector<Vertex> un, rest;
    for (Vertex v = 0; v < g.size(); ++v) {
        bool has_head = false;
        for (Vertex w : g.neighbors(v)) has_head = has_head || g.arrowhead_at(v, w);
        (has_head ? rest : un).push_back(v);
    }
    return {std::move(un), std::move(rest)};
}

inline std::vector<Vertex> parents(const MixedGraph& g, Vertex v) {
    std::vector<Vertex> out;
    for (Vertex w : g.neighbors(v)) {
        if (g.mark(w, v) == Mark::Out) out.push_back(w);
    }
    return out;
}

inline std::vector<Vertex> spouses(const MixedGraph& g, Vertex v) {
    std::vector<Vertex> out;
    for (Vertex w : g.neighbors(v)) {
        if (g.mark(w, v) == Mark::Both) out.push_back(w);
    }
    return out;
}

/// Σ(Λ, B, Ω) = (I - B)⁻¹ diag(Λ⁻¹, Ω) (I - B)⁻ᵀ, with the block matrix laid
/// out on the original vertex positions. Throws SupportViolation or
/// NotPositiveDefinite.
template <typename Scalar>
Matrix<Scalar> sigma_from_params(const AncestralParams<Scalar>& params, const MixedGraph& gmin) {
    const auto [un, rest] = tail_partition(gmin);
    if (un != params.undirected || rest != params.arrowhead) {
        throw Error(ErrorKind::SupportViolation, "parameter blocks do not match the graph's tail partition");
    }
    const Index p = Index(gmin.size());
    detail::check_square(params.b.rows(), params.b.cols(), gmin.size(), "B");
    detail::check_square(params.lambda.rows(), params.lambda.cols(), un.size(), "Lambda");
    detail::check_square(params.omega.rows(), params.omega.cols(), rest.size(), "Omega");

    auto check_block = [&](const Matrix<Scalar>& m, const std::vector<Vertex>& idx, Mark allowed, const char* what) {
        for (std::size_t i = 0; i < idx.size(); ++i) {
            for (std::size_t j = 0; j < idx.size(); ++j) {
                const Scalar value = m(Index(i), Index(j));
                if (value != m(Index(j), Index(i))) {
                    throw Error(ErrorKind::SupportViolation, std::string(what) + " is not symmetric");
                }
                if (i != j && value != Scalar(0) && gmin.mark(idx[i], idx[j]) != allowed) {
                    throw Error(ErrorKind::SupportViolation, std::string(what) + " is non-zero at (" +
                                                                 gmin.name(idx[i]) + ", " + gmin.name(idx[j]) + ")");
                }
            }
        }
    };
    check_block(params.lambda, un, Mark::Line, "Lambda");
    check_block(params.omega, rest, Mark::Both, "Omega");
    for (Vertex v = 0; v < gmin.size(); ++v) {
        for (Vertex w = 0; w < gmin.size(); ++w) {
            if (params.b(Index(v), Index(w)) != Scalar(0) && gmin.mark(w, v) != Mark::Out) {
                throw Error(ErrorKind::SupportViolation,
                            "B is non-zero at (" + gmin.name(v) + ", " + gmin.name(w) + ") without an edge " +
                                gmin.name(w) + " -> " + gmin.name(v));
            }
        }
    }

    Matrix<Scalar> middle = Matrix<Scalar>::Zero(p, p);
    if (!un.empty()) {
        const auto llt = detail::cholesky(params.lambda, "Lambda");
        const Matrix<Scalar> cov = llt.solve(Matrix<Scalar>::Identity(params.lambda.rows(), params.lambda.cols()));
        for (std::size_t i = 0; i < un.size(); ++i) {
            for (std::size_t j = 0; j < un.size(); ++j) middle(Index(un[i]), Index(un[j])) = cov(Index(i), Index(j));
        }
    }
    if (!rest.empty()) {
        detail::cholesky(params.omega, "Omega");
        for (std::size_t i = 0; i < rest.size(); ++i) {
            for (std::size_t j = 0; j < rest.size(); ++j) {
                middle(Index(rest[i]), Index(rest[j])) = params.omega(Index(i), Index(j));
            }
        }
    }
    const Matrix<Scalar> ib = Matrix<Scalar>::Identity(p, p) - params.b;
    const Matrix<Scalar> left = ib.partialPivLu().solve(Matrix<Scalar>::Identity(p, p));
    Matrix<Scalar> sigma = left * middle * left.transpose();
    return (sigma + sigma.transpose()) / Scalar(2);
}

/// Inverse of sigma_from_params for Σ in the model of `gmin`: regressions
/// onto parents give B, and (I - B) Σ (I - B)ᵀ gives the two blocks. Entries
/// outside the support are set to zero.
template <typename Scalar>
AncestralParams<Scalar> extract_params(const Matrix<Scalar>& sigma, const MixedGraph& gmin) {
    detail::check_square(sigma.rows(), sigma.cols(), gmin.size(), "Sigma");
    const Index p = Index(gmin.size());
    auto [un, rest] = tail_partition(gmin);
    AncestralParams<Scalar> out;
    out.b = Matrix<Scalar>::Zero(p, p);
    for (Vertex v = 0; v < gmin.size(); ++v) {
        const auto pa = parents(gmin, v);
        if (pa.empty()) continue;
        const auto reg = regression_quantities(sigma, v, pa);
        for (std::size_t i = 0; i < pa.size(); ++i) out.b(Index(v), Index(pa[i])) = reg.coefficients(Index(i));
    }
    const Matrix<Scalar> ib = Matrix<Scalar>::Identity(p, p) - out.b;
    const Matrix<Scalar> middle = ib * sigma * ib.transpose();

    auto block = [&](const std::vector<Vertex>& idx, Mark allowed) {
        Matrix<Scalar> m = detail::submatrix(middle, idx, idx);
        for (std::size_t i = 0; i < idx.size(); ++i) {
            for (std::size_t j = 0; j < idx.size(); ++j) {
                if (i != j && gmin.mark(idx[i], idx[j]) != allowed) m(Index(i), Index(j)) = Scalar(0);
            }
        }
        return Matrix<Scalar>((m + m.transpose()) / Scalar(2));
    };
    const Matrix<Scalar> lambda_inv = block(un, Mark::Line);
    out.lambda = un.empty() ? Matrix<Scalar>(0, 0)
                            : Matrix<Scalar>(detail::cholesky(lambda_inv, "undirected block")
                                                 .solve(Matrix<Scalar>::Identity(lambda_inv.rows(), lambda_inv.cols())));
    // Exact zeros outside the support and exact symmetry after inversion.
    for (std::size_t i = 0; i < un.size(); ++i) {
        for (std::size_t j = 0; j < un.size(); ++j) {
            if (i != j && gmin.mark(un[i], un[j]) != Mark::Line) out.lambda(Index(i), Index(j)) = Scalar(0);
        }
    }
    out.lambda = ((out.lambda + out.lambda.transpose()) / Scalar(2)).eval();
    out.omega = block(rest, Mark::Both);
    out.undirected = std::move(un);
    out.arrowhead = std::move(rest);
    return out;
}

/// Upper tail of the chi-square distribution.
template <typename Scalar>
Scalar chi_square_upper_tail(Scalar x, std::size_t df) {
    if (df == 0) return Scalar(1);
    if (!(x > Scalar(0))) return Scalar(1);
    return boost::math::gamma_q(Scalar(df) / Scalar(2), x / Scalar(2));
}

template <typename Scalar>
struct DevianceTest {
    Scalar deviance;
    std::size_t df;
    Scalar p_value;
};

/// n [tr(Σ̂⁻¹S) - log det(Σ̂⁻¹S) - |V|] against chi-square with one degree
/// of freedom per missing edge of G.
template <typename Scalar>
DevianceTest<Scalar> deviance(const Matrix<Scalar>& sigma_hat, const Matrix<Scalar>& s, Scalar n, const MixedGraph& g) {
    detail::check_square(sigma_hat.rows(), sigma_hat.cols(), g.size(), "Sigma");
    detail::check_square(s.rows(), s.cols(), g.size(), "S");
    const auto llt_sigma = detail::cholesky(sigma_hat, "Sigma");
    const auto llt_s = detail::cholesky(s, "S");
    const Scalar p = Scalar(g.size());
    const Scalar trace = llt_sigma.solve(s).trace();
    Scalar dev = n * (trace - (detail::log_det(llt_s) - detail::log_det(llt_sigma)) - p);
    if (dev < Scalar(0)) dev = Scalar(0); // rounding at the saturated optimum
    const std::size_t df = g.size() * (g.size() - (g.size() > 0 ? 1 : 0)) / 2 - g.edge_count();
    return {dev, df, chi_square_upper_tail(dev, df)};
}

} // namespace minorient
