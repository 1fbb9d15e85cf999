#include "ksupg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <set>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <Eigen/SparseLU>

#include "ksupg/error.hpp"
#include "ksupg/fem.hpp"
#include "ksupg/solver.hpp"

namespace ksupg {

namespace {

constexpr Index kDenseLimit = 2000;

Eigen::MatrixXd printed_operator(const Mesh& mesh, const AdvectionProblem& p) {
    const AssemblyPattern pattern(mesh);
    const GlobalOperators ops = assemble_operators(mesh, pattern);
    const double rb = std::sqrt(p.beta);
    const double s1 = p.c1 * rb, s2 = p.c2 * rb;
    const double e1 = std::erf(s1), e2 = std::erf(s2);
    const double w = std::sqrt(p.beta / M_PI);
    Eigen::MatrixXd L = p.c1 * ops.Cx.to_dense() + p.c2 * ops.Cy.to_dense();
    L += w * (std::exp(-s1 * s1) / M_PI + p.c1 * e1) * ops.HDx.to_dense();
    L += w * (p.c2 * e1 + p.c1 * e2) * ops.HDxy.to_dense();
    L += w * (std::exp(-s2 * s2) / M_PI + p.c2 * e2) * ops.HDy.to_dense();
    return L;
}

Eigen::MatrixXd scheme_operator(const Mesh& mesh, const AdvectionProblem& p) {
    auto shared = std::make_shared<const Mesh>(mesh);
    const Solver solver(shared, BoundaryPlan(), SolverConfig{});
    const ConservedField field(shared, Equation::Burgers2D, GasModel{}, ScalarFlux::linear(p.c1, p.c2, p.beta));
    return solver.spatial_operator(field).to_dense();
}

Eigen::MatrixXd random_block(Index n, Index p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist;
    Eigen::MatrixXd X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    for (Eigen::Index j = 0; j < X.cols(); ++j)
        for (Eigen::Index i = 0; i < X.rows(); ++i) X(i, j) = dist(rng);
    return X;
}

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& Y) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(Y);
    return qr.householderQ() * Eigen::MatrixXd::Identity(Y.rows(), Y.cols());
}

}  // namespace

std::vector<Index> inflow_nodes(const Mesh& mesh, double c1, double c2) {
    std::set<Index> nodes;
    for (const auto& set : mesh.boundaries())
        for (std::size_t k = 0; k < set.nodes.size(); ++k)
            if (c1 * set.normals[k][0] + c2 * set.normals[k][1] < -1e-12) nodes.insert(set.nodes[k]);
    return {nodes.begin(), nodes.end()};
}

Eigen::MatrixXd explicit_update_operator(const Mesh& mesh, const AdvectionProblem& problem) {
    require(mesh.dim() == 2, ErrorCode::InvalidArgument, "stability analysis needs a 2D mesh");
    require(mesh.node_count() <= kDenseLimit, ErrorCode::SizeLimit,
            "dense amplification matrix limited to " + std::to_string(kDenseLimit) + " nodes");
    Eigen::MatrixXd L =
        problem.model == AmplificationModel::Scheme ? scheme_operator(mesh, problem) : printed_operator(mesh, problem);
    const AssemblyPattern pattern(mesh);
    Eigen::MatrixXd M = assemble(mesh, pattern, MatrixKind::M).to_dense();
    for (Index i : inflow_nodes(mesh, problem.c1, problem.c2)) {
        const auto r = static_cast<Eigen::Index>(i);
        L.row(r).setZero();
        M.row(r).setZero();
        M(r, r) = 1.0;
    }
    return M.partialPivLu().solve(L);
}

Eigen::MatrixXd amplification_matrix(const Mesh& mesh, const AdvectionProblem& problem, double dt) {
    Eigen::MatrixXd K = explicit_update_operator(mesh, problem);
    const Eigen::Index n = K.rows();
    return Eigen::MatrixXd::Identity(n, n) - dt * K;
}

AmplificationSpectrum::AmplificationSpectrum(const Mesh& mesh, const AdvectionProblem& problem)
    : AmplificationSpectrum(explicit_update_operator(mesh, problem)) {}

AmplificationSpectrum::AmplificationSpectrum(const Eigen::MatrixXd& K) {
    require(K.rows() == K.cols(), ErrorCode::DimensionMismatch, "update operator must be square");
    Eigen::EigenSolver<Eigen::MatrixXd> es(K, false);
    require(es.info() == Eigen::Success, ErrorCode::InvalidArgument, "eigenvalue computation failed");
    const auto& ev = es.eigenvalues();
    mu_.assign(ev.data(), ev.data() + ev.size());
}

double AmplificationSpectrum::radius(double dt) const {
    double rho = 0.0;
    for (const auto& mu : mu_) rho = std::max(rho, std::abs(1.0 - dt * mu));
    return rho;
}

SpectralRadiusResult spectral_radius(const MatrixAction& action, Index n, double tol, std::size_t maxit,
                                     std::uint64_t seed) {
    require(n > 0, ErrorCode::InvalidArgument, "empty operator");
    require(tol > 0.0, ErrorCode::InvalidArgument, "tolerance must be positive");
    const Index p = std::min<Index>(n, 6);
    Eigen::MatrixXd Q = orthonormalize(random_block(n, p, seed));
    Eigen::MatrixXd Y(Q.rows(), Q.cols());
    SpectralRadiusResult out;
    double previous = -1.0;
    int settled = 0;
    for (std::size_t it = 1; it <= maxit; ++it) {
        action(Q, Y);
        const Eigen::MatrixXd H = Q.transpose() * Y;
        const Eigen::VectorXcd ritz = Eigen::EigenSolver<Eigen::MatrixXd>(H, false).eigenvalues();
        const double estimate = ritz.cwiseAbs().maxCoeff();
        out.value = estimate;
        out.iterations = it;
        if (estimate == 0.0 || std::abs(estimate - previous) < tol * estimate) {
            if (++settled >= 3 || estimate == 0.0) {
                out.converged = true;
                break;
            }
        } else {
            settled = 0;
        }
        previous = estimate;
        if (Y.norm() == 0.0) break;
        Q = orthonormalize(Y);
    }
    return out;
}

SpectralRadiusResult spectral_radius(const Eigen::MatrixXd& A, double tol, std::size_t maxit, std::uint64_t seed) {
    require(A.rows() == A.cols(), ErrorCode::DimensionMismatch, "operator must be square");
    return spectral_radius([&A](const Eigen::MatrixXd& X, Eigen::MatrixXd& Y) { Y.noalias() = A * X; },
                           static_cast<Index>(A.rows()), tol, maxit, seed);
}

double spectral_radius_dense(const Eigen::MatrixXd& A) {
    require(A.rows() == A.cols(), ErrorCode::DimensionMismatch, "operator must be square");
    if (A.size() == 0) return 0.0;
    return Eigen::EigenSolver<Eigen::MatrixXd>(A, false).eigenvalues().cwiseAbs().maxCoeff();
}

double find_critical_dt(const AmplificationSpectrum& spectrum, double lo, double hi, double tol) {
    require(lo >= 0.0 && hi > lo && tol > 0.0, ErrorCode::InvalidArgument, "invalid bisection bracket");
    const double rlo = spectrum.radius(lo), rhi = spectrum.radius(hi);
    require(rlo <= 1.0 + kStableSlack && rhi > 1.0 + kStableSlack, ErrorCode::BadBracket,
            "bracket does not straddle the stability limit (rho(lo) = " + std::to_string(rlo) +
                ", rho(hi) = " + std::to_string(rhi) + ")");
    while (hi - lo >= tol) {
        const double mid = 0.5 * (lo + hi);
        (spectrum.radius(mid) <= 1.0 + kStableSlack ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double find_critical_dt(const Mesh& mesh, const AdvectionProblem& problem, double lo, double hi, double tol) {
    return find_critical_dt(AmplificationSpectrum(mesh, problem), lo, hi, tol);
}

StabilityReport stability_sweep(const Mesh& mesh, const AdvectionProblem& problem, double lo, double hi,
                                std::size_t steps) {
    require(steps >= 2 && hi > lo && lo >= 0.0, ErrorCode::InvalidArgument, "invalid sweep range");
    const AmplificationSpectrum spectrum(mesh, problem);
    StabilityReport report;
    for (std::size_t k = 0; k < steps; ++k) {
        const double dt = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(steps - 1);
        report.dt_values.push_back(dt);
        report.spectral_radii.push_back(spectrum.radius(dt));
    }
    const bool bracketed = spectrum.radius(lo) <= 1.0 + kStableSlack && spectrum.radius(hi) > 1.0 + kStableSlack;
    report.dt_critical = bracketed ? find_critical_dt(spectrum, lo, hi, (hi - lo) * 1e-6)
                                   : std::numeric_limits<double>::quiet_NaN();
    return report;
}

MatrixDiagnostics matrix_diagnostics(const CsrMatrix& A, bool compute_condition) {
    require(A.rows() == A.cols(), ErrorCode::DimensionMismatch, "diagnostics need a square matrix");
    MatrixDiagnostics d;
    d.n = A.rows();
    d.nnz = A.nnz();
    d.symmetric = A.is_symmetric();
    const auto& off = A.offsets();
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t k = off[i]; k < off[i + 1]; ++k)
            if (A.values()[k] != 0.0) {
                const std::size_t j = A.columns()[k];
                d.half_bandwidth = std::max(d.half_bandwidth, i > j ? i - j : j - i);
            }
    if (!compute_condition || d.n == 0) return d;

    if (d.n <= kDenseLimit) {
        const Eigen::VectorXd sv = Eigen::BDCSVD<Eigen::MatrixXd>(A.to_dense()).singularValues();
        const double smax = sv(0), smin = sv(sv.size() - 1);
        require(smin > smax * 1e-300 && smin > 0.0, ErrorCode::SingularMatrix, "matrix is numerically singular");
        d.condition_number_l2 = smax / smin;
        return d;
    }

    const Eigen::SparseMatrix<double> S = A.to_eigen();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(S);
    require(lu.info() == Eigen::Success, ErrorCode::SingularMatrix, "sparse LU failed: " + lu.lastErrorMessage());

    auto iterate = [&](auto&& apply) {
        Eigen::VectorXd x = random_block(d.n, 1, 11).col(0).normalized();
        double lambda = 0.0;
        for (int it = 0; it < 5000; ++it) {
            Eigen::VectorXd y = apply(x);
            const double next = y.norm();
            require(std::isfinite(next), ErrorCode::SingularMatrix, "inverse iteration diverged");
            if (next == 0.0) return 0.0;
            x = y / next;
            const bool done = std::abs(next - lambda) < 1e-10 * next;
            lambda = next;
            if (done) break;
        }
        return lambda;
    };
    const double smax2 = iterate([&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        return S.transpose() * (S * x);
    });
    const double inv_smin2 = iterate([&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        const Eigen::VectorXd y = lu.transpose().solve(x);
        return lu.solve(y);
    });
    require(inv_smin2 > 0.0 && std::isfinite(inv_smin2) && inv_smin2 < 1e300, ErrorCode::SingularMatrix,
            "smallest singular value underflows");
    d.condition_number_l2 = std::sqrt(smax2 * inv_smin2);
    return d;
}

}  // namespace ksupg
