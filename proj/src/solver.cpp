#include "ksupg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ksupg/error.hpp"

namespace ksupg {

namespace {

// y[i*m + c] (+)= Σ_j A(i, j)·x[j*m + c]
void spmv_interleaved(const CsrMatrix& A, const std::vector<double>& x, std::size_t m, std::vector<double>& y) {
    const auto& off = A.offsets();
    const auto& col = A.columns();
    const auto& val = A.values();
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t k = off[i]; k < off[i + 1]; ++k) {
            const double a = val[k];
            const double* src = x.data() + col[k] * m;
            double* dst = y.data() + i * m;
            for (std::size_t c = 0; c < m; ++c) dst[c] += a * src[c];
        }
}

StateMat scalar_block(double v) {
    StateMat B(1, 1);
    B(0, 0) = v;
    return B;
}

}  // namespace

void SolverConfig::validate() const {
    require(theta >= 0.0 && theta <= 1.0, ErrorCode::InvalidArgument, "theta must lie in [0, 1]");
    require(cfl > 0.0 && std::isfinite(cfl), ErrorCode::InvalidArgument, "CFL must be positive");
    require(linear_tol > 0.0, ErrorCode::InvalidArgument, "linear tolerance must be positive");
    require(linear_maxit > 0, ErrorCode::InvalidArgument, "linear iteration cap must be positive");
    require(picard_sweeps >= 1, ErrorCode::InvalidArgument, "at least one Picard sweep is required");
    require(steady_tol > 0.0, ErrorCode::InvalidArgument, "steady tolerance must be positive");
    require(alpha > 1.4 && alpha <= 2.0, ErrorCode::InvalidArgument, "alpha must lie in (1.4, 2]");
    require(!final_time || *final_time >= 0.0, ErrorCode::InvalidArgument, "final time must be non-negative");
}

double residue(const std::vector<double>& previous, const std::vector<double>& current) {
    require(previous.size() == current.size(), ErrorCode::DimensionMismatch, "residue size mismatch");
    double diff = 0.0, norm = 0.0;
    for (std::size_t k = 0; k < current.size(); ++k) {
        diff += (current[k] - previous[k]) * (current[k] - previous[k]);
        norm += current[k] * current[k];
    }
    return norm > 0.0 ? std::sqrt(diff / norm) : std::sqrt(diff);
}

Solver::Solver(std::shared_ptr<const Mesh> mesh, BoundaryPlan boundaries, SolverConfig config)
    : mesh_(std::move(mesh)), bc_(std::move(boundaries)), config_(config), pattern_(*mesh_),
      ops_(assemble_operators(*mesh_, pattern_)), mass_tilde_(ops_.M) {
    config_.validate();
    for (const auto& f : bc_.fixed()) mass_tilde_.replace_row_with_identity(f.node);
}

double Solver::compute_dt(const ConservedField& field) const { return compute_dt(field, config_.cfl); }

double Solver::compute_dt(const ConservedField& field, double cfl) const {
    require(cfl > 0.0, ErrorCode::InvalidArgument, "CFL must be positive");
    const std::size_t n = field.node_count();
    std::vector<double> speed(n);
    const ScalarFlux& f = field.flux();
    for (Index i = 0; i < n; ++i) {
        switch (field.equation()) {
            case Equation::Burgers1D: speed[i] = f.speed1(field.component(i, 0)); break;
            case Equation::Burgers2D: {
                const double u = field.component(i, 0);
                speed[i] = std::max(f.speed1(u), f.speed2(u));
                break;
            }
            case Equation::Euler1D:
            case Equation::Euler2D: {
                const double rho = field.density(i), p = field.pressure(i);
                require(rho > 0.0 && p > 0.0, ErrorCode::InvalidState,
                        "non-positive density or pressure at node " + std::to_string(i));
                const Vec2 v = field.velocity(i);
                speed[i] = std::hypot(v[0], v[1]) + std::sqrt(field.gas().gamma * p / rho);
                break;
            }
        }
        speed[i] = std::max(speed[i], 1e-8);
    }
    double dt = std::numeric_limits<double>::infinity();
    for (const auto& el : field.mesh().elements()) {
        double lambda = 0.0;
        for (Index v : el.vertices()) lambda = std::max(lambda, speed[v]);
        dt = std::min(dt, el.h / lambda);
    }
    return cfl * dt;
}

std::vector<double> Solver::shock_delta(const ConservedField& field) const {
    if (!config_.shock_capturing || dimension(field.equation()) != 2) return std::vector<double>(field.node_count(), 0.0);
    return shock_capture_delta(field, config_.sensing, config_.alpha, config_.sensor_frame);
}

std::vector<double> Solver::residual(const ConservedField& field) const {
    require(field.node_count() == mesh_->node_count(), ErrorCode::DimensionMismatch, "field belongs to another mesh");
    const std::size_t n = field.node_count(), m = field.components();
    const bool two_d = dimension(field.equation()) == 2;
    std::vector<double> G1(n * m), G2(two_d ? n * m : 0), Sx(n * m), Sy(two_d ? n * m : 0), Sxy(two_d ? n * m : 0),
        Syx(two_d ? n * m : 0);
    for (Index i = 0; i < n; ++i) {
        const MomentSet mo = field.moments(i);
        for (std::size_t c = 0; c < m; ++c) {
            const auto ci = static_cast<Eigen::Index>(c);
            G1[i * m + c] = mo.G1(ci);
            Sx[i * m + c] = mo.Sx(ci);
            if (!two_d) continue;
            G2[i * m + c] = mo.G2(ci);
            Sy[i * m + c] = mo.Sy(ci);
            Sxy[i * m + c] = mo.Sxy(ci);
            Syx[i * m + c] = mo.Syx(ci);
        }
    }
    std::vector<double> R(n * m, 0.0);
    spmv_interleaved(ops_.Cx, G1, m, R);
    spmv_interleaved(ops_.HDx, Sx, m, R);
    if (two_d) {
        spmv_interleaved(ops_.Cy, G2, m, R);
        spmv_interleaved(ops_.HDy, Sy, m, R);
        if (config_.cross == CrossDiffusion::Shared) {
            for (std::size_t k = 0; k < Sxy.size(); ++k) Sxy[k] += Syx[k];
            spmv_interleaved(ops_.HDxy, Sxy, m, R);
        } else {
            spmv_interleaved(ops_.HDxy, Sxy, m, R);
            spmv_interleaved(ops_.HDyx, Syx, m, R);
        }
        const std::vector<double> delta = shock_delta(field);
        if (std::any_of(delta.begin(), delta.end(), [](double d) { return d != 0.0; })) {
            std::vector<double> diff(n * m, 0.0);
            spmv_interleaved(ops_.Dx, field.values(), m, diff);
            spmv_interleaved(ops_.Dy, field.values(), m, diff);
            for (Index i = 0; i < n; ++i)
                for (std::size_t c = 0; c < m; ++c) R[i * m + c] += delta[i] * diff[i * m + c];
        }
    }
    return R;
}

CsrMatrix Solver::spatial_operator(const ConservedField& field) const {
    require(field.node_count() == mesh_->node_count(), ErrorCode::DimensionMismatch, "field belongs to another mesh");
    const std::size_t n = field.node_count(), m = field.components();
    std::vector<Block> A1(n), A2, Dx(n), Dy, Dxy, Dyx;
    const bool two_d = dimension(field.equation()) == 2;
    if (two_d) {
        A2.resize(n);
        Dy.resize(n);
        Dxy.resize(n);
        Dyx.resize(n);
    }
    const ScalarFlux& f = field.flux();
    for (Index i = 0; i < n; ++i) {
        switch (field.equation()) {
            case Equation::Burgers1D: {
                const double c = f.c1(field.component(i, 0));
                A1[i] = scalar_block(c);
                Dx[i] = scalar_block(scalar_dtilde(c, 0.0, f.beta).dx);
                break;
            }
            case Equation::Burgers2D: {
                const double u = field.component(i, 0);
                const ScalarCoefficients d = scalar_dtilde(f.c1(u), f.c2(u), f.beta);
                A1[i] = scalar_block(f.c1(u));
                A2[i] = scalar_block(f.c2(u));
                Dx[i] = scalar_block(d.dx);
                Dy[i] = scalar_block(d.dy);
                Dxy[i] = scalar_block(d.dxy);
                Dyx[i] = scalar_block(d.dyx);
                break;
            }
            case Equation::Euler1D: {
                const GasState1D s = field.gas1d(i);
                A1[i] = jacobian_1d(s);
                Dx[i] = dtilde_1d(s);
                break;
            }
            case Equation::Euler2D: {
                const GasState2D s = field.gas2d(i);
                const Jacobians2D J = jacobians_2d(s);
                const DTilde2D D = dtilde_2d(s);
                A1[i] = J.A1;
                A2[i] = J.A2;
                Dx[i] = D.Dx;
                Dy[i] = D.Dy;
                Dxy[i] = D.Dxy;
                Dyx[i] = D.Dyx;
                break;
            }
        }
        if (two_d && config_.cross == CrossDiffusion::Shared) Dxy[i] += Dyx[i];
    }
    std::vector<BlockTerm> terms{{&ops_.Cx, 1.0, A1, {}}, {&ops_.HDx, 1.0, Dx, {}}};
    std::vector<double> delta;
    if (two_d) {
        terms.push_back({&ops_.Cy, 1.0, A2, {}});
        terms.push_back({&ops_.HDy, 1.0, Dy, {}});
        terms.push_back({&ops_.HDxy, 1.0, Dxy, {}});
        if (config_.cross == CrossDiffusion::Transpose) terms.push_back({&ops_.HDyx, 1.0, Dyx, {}});
        delta = shock_delta(field);
        terms.push_back({&ops_.Dx, 1.0, {}, delta});
        terms.push_back({&ops_.Dy, 1.0, {}, delta});
    }
    return block_assemble(m, terms);
}

CsrMatrix Solver::mass_operator() const {
    if (!config_.mass_lumping) return ops_.M;
    CsrMatrix lumped = pattern_.zero();
    for (Index i = 0; i < lumped.rows(); ++i) lumped.values()[lumped.find(i, i)] = ops_.lumped_mass[i];
    return lumped;
}

CsrMatrix Solver::system_matrix(const ConservedField& field, double dt) const {
    const std::size_t m = field.components();
    CsrMatrix K = block_expand(mass_operator(), m);
    if (config_.theta > 0.0) K.add_same_pattern(spatial_operator(field), config_.theta * dt);
    std::vector<double> rhs(K.rows(), 0.0);
    bc_.impose_rows(K, rhs, m);
    return K;
}

void Solver::finish_step(ConservedField& field, const std::vector<double>& previous, StepReport& report,
                         std::chrono::steady_clock::time_point start) const {
    bc_.apply(field);
    field.validate();
    report.residue = residue(previous, field.values());
    report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

StepReport Solver::explicit_step(ConservedField& field, double dt) const {
    const auto start = std::chrono::steady_clock::now();
    require(dt > 0.0, ErrorCode::InvalidArgument, "time step must be positive");
    const std::size_t n = field.node_count(), m = field.components();
    const std::vector<double> previous = field.values();
    const std::vector<double> R = residual(field);
    StepReport report;
    report.dt = dt;
    std::vector<double>& U = field.values();
    if (config_.mass_lumping) {
        for (Index i = 0; i < n; ++i) {
            if (bc_.is_fixed(i)) continue;
            for (std::size_t c = 0; c < m; ++c) U[i * m + c] -= dt * R[i * m + c] / ops_.lumped_mass[i];
        }
    } else {
        std::vector<double> rhs(n), x0(n, 0.0);
        for (std::size_t c = 0; c < m; ++c) {
            for (Index i = 0; i < n; ++i) rhs[i] = bc_.is_fixed(i) ? 0.0 : -dt * R[i * m + c];
            const LinearSolveResult sol = bicgstab(mass_tilde_, rhs, x0, {config_.linear_tol, config_.linear_maxit, config_.jacobi});
            require(sol.converged, ErrorCode::LinearSolverFailure,
                    "mass solve did not converge (residual " + std::to_string(sol.residual) + ")");
            report.linear_iterations += sol.iterations;
            for (Index i = 0; i < n; ++i) U[i * m + c] += sol.x[i];
        }
    }
    finish_step(field, previous, report, start);
    return report;
}

StepReport Solver::implicit_step(ConservedField& field, double dt) const {
    const auto start = std::chrono::steady_clock::now();
    require(dt > 0.0, ErrorCode::InvalidArgument, "time step must be positive");
    const std::size_t m = field.components();
    const std::vector<double> previous = field.values();
    const CsrMatrix Mb = block_expand(mass_operator(), m);
    const std::vector<double> MU = spmv(Mb, previous);
    StepReport report;
    report.dt = dt;
    for (int sweep = 0; sweep < config_.picard_sweeps; ++sweep) {
        const CsrMatrix L = spatial_operator(field);
        CsrMatrix K = Mb;
        K.add_same_pattern(L, config_.theta * dt);
        std::vector<double> rhs = MU;
        if (config_.theta < 1.0) {
            const std::vector<double> LU = spmv(L, previous);
            for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] -= (1.0 - config_.theta) * dt * LU[k];
        }
        bc_.impose_rows(K, rhs, m);
        const LinearSolveResult sol =
            bicgstab(K, rhs, field.values(), {config_.linear_tol, config_.linear_maxit, config_.jacobi});
        require(sol.converged, ErrorCode::LinearSolverFailure,
                "implicit solve did not converge (residual " + std::to_string(sol.residual) + ")");
        report.linear_iterations += sol.iterations;
        field.values() = sol.x;
        bc_.apply(field);
    }
    finish_step(field, previous, report, start);
    return report;
}

StepReport Solver::step(ConservedField& field, double dt) const {
    return config_.theta == 0.0 ? explicit_step(field, dt) : implicit_step(field, dt);
}

RunResult Solver::run_transient(ConservedField& field) const {
    require(config_.final_time.has_value(), ErrorCode::InvalidArgument, "transient run needs a final time");
    const double T = *config_.final_time;
    RunResult out;
    bc_.apply(field);
    double t = 0.0;
    while (t < T && T - t > 1e-14 * T) {
        require(out.history.size() < config_.max_steps, ErrorCode::InvalidArgument,
                "step cap reached before the final time");
        double dt = compute_dt(field);
        const bool last = t + dt >= T;
        if (last) dt = T - t;
        StepReport r = step(field, dt);
        t = last ? T : t + dt;
        r.time = t;
        out.history.push_back(r);
    }
    out.time = t;
    out.converged = true;
    return out;
}

RunResult Solver::run_steady(ConservedField& field) const {
    RunResult out;
    bc_.apply(field);
    double t = 0.0;
    while (out.history.size() < config_.max_steps) {
        const double dt = compute_dt(field);
        StepReport r = step(field, dt);
        t += dt;
        r.time = t;
        out.history.push_back(r);
        if (r.residue < config_.steady_tol) {
            out.converged = true;
            break;
        }
    }
    out.time = t;
    return out;
}

}  // namespace ksupg
