#include "ksupg/kinetic.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>

#include "ksupg/error.hpp"
#include "ksupg/fem.hpp"

namespace ksupg {

namespace {

using std::numbers::pi;

StateVec vec(std::initializer_list<double> values) {
    StateVec v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index k = 0;
    for (double x : values) v(k++) = x;
    return v;
}

StateMat zero_mat(Eigen::Index m) { return StateMat::Zero(m, m); }

// e^{-s²}/√(πβ)
double bhat(double s, double beta) { return std::exp(-s * s) / std::sqrt(pi * beta); }

void check_consistency(double rho, double p, double E, double kinetic, double gamma) {
    require(std::isfinite(rho) && std::isfinite(p) && std::isfinite(E), ErrorCode::InvalidState, "non-finite gas state");
    require(rho > 0.0, ErrorCode::InvalidState, "density must be positive");
    require(p > 0.0, ErrorCode::InvalidState, "pressure must be positive");
    require(gamma > 1.0, ErrorCode::InvalidState, "gamma must exceed 1");
    const double expected = p / (rho * (gamma - 1.0)) + kinetic;
    require(std::abs(E - expected) <= 1e-12 * std::max(std::abs(E), std::abs(expected)), ErrorCode::InvalidState,
            "total energy inconsistent with pressure and velocity");
}

}  // namespace

GasState1D GasState1D::from_primitive(double rho, double u, double p, double gamma, double R) {
    GasState1D s{rho, u, p, p / (rho * (gamma - 1.0)) + 0.5 * u * u, gamma, R};
    s.validate();
    return s;
}

GasState1D GasState1D::from_conserved(const StateVec& U, double gamma, double R) {
    require(U.size() == 3, ErrorCode::DimensionMismatch, "1D Euler state has 3 components");
    const double rho = U(0);
    require(rho > 0.0 && std::isfinite(rho), ErrorCode::InvalidState, "density must be positive");
    const double u = U(1) / rho;
    const double E = U(2) / rho;
    const double p = (gamma - 1.0) * (U(2) - 0.5 * rho * u * u);
    require(p > 0.0 && std::isfinite(p), ErrorCode::InvalidState, "pressure must be positive");
    return {rho, u, p, E, gamma, R};
}

StateVec GasState1D::conserved() const { return vec({rho, rho * u, rho * E}); }
double GasState1D::sound_speed() const { return std::sqrt(gamma * p / rho); }
void GasState1D::validate() const { check_consistency(rho, p, E, 0.5 * u * u, gamma); }

GasState2D GasState2D::from_primitive(double rho, double u1, double u2, double p, double gamma, double R) {
    GasState2D s{rho, u1, u2, p, p / (rho * (gamma - 1.0)) + 0.5 * (u1 * u1 + u2 * u2), gamma, R};
    s.validate();
    return s;
}

GasState2D GasState2D::from_conserved(const StateVec& U, double gamma, double R) {
    require(U.size() == 4, ErrorCode::DimensionMismatch, "2D Euler state has 4 components");
    const double rho = U(0);
    require(rho > 0.0 && std::isfinite(rho), ErrorCode::InvalidState, "density must be positive");
    const double u1 = U(1) / rho, u2 = U(2) / rho;
    const double E = U(3) / rho;
    const double p = (gamma - 1.0) * (U(3) - 0.5 * rho * (u1 * u1 + u2 * u2));
    require(p > 0.0 && std::isfinite(p), ErrorCode::InvalidState, "pressure must be positive");
    return {rho, u1, u2, p, E, gamma, R};
}

StateVec GasState2D::conserved() const { return vec({rho, rho * u1, rho * u2, rho * E}); }
double GasState2D::sound_speed() const { return std::sqrt(gamma * p / rho); }
void GasState2D::validate() const { check_consistency(rho, p, E, 0.5 * (u1 * u1 + u2 * u2), gamma); }

KineticParams kinetic_params(const GasState1D& s) {
    const double rt = s.p / s.rho;
    const double beta = 0.5 / rt;
    return {beta, s.u * std::sqrt(beta), 0.0, (3.0 - s.gamma) / (2.0 * (s.gamma - 1.0)) * rt};
}

KineticParams kinetic_params(const GasState2D& s) {
    const double rt = s.p / s.rho;
    const double beta = 0.5 / rt;
    const double sb = std::sqrt(beta);
    return {beta, s.u1 * sb, s.u2 * sb, (2.0 - s.gamma) / (s.gamma - 1.0) * rt};
}

MomentSet scalar1d_moments(double u, double c, double beta) {
    require(beta > 0.0, ErrorCode::InvalidArgument, "beta must be positive");
    const double s = c * std::sqrt(beta);
    MomentSet m;
    m.U = vec({u});
    m.G1 = vec({c * u});
    m.Sx = vec({u * (c * std::erf(s) + bhat(s, beta))});
    return m;
}

MomentSet scalar2d_moments(double u, double c1, double c2, double beta) {
    require(beta > 0.0, ErrorCode::InvalidArgument, "beta must be positive");
    const double sb = std::sqrt(beta);
    const double s1 = c1 * sb, s2 = c2 * sb;
    const double erf1 = std::erf(s1), erf2 = std::erf(s2);
    MomentSet m;
    m.U = vec({u});
    m.G1 = vec({c1 * u});
    m.G2 = vec({c2 * u});
    m.Sx = vec({u * (c1 * erf1 + bhat(s1, beta))});
    m.Sy = vec({u * (c2 * erf2 + bhat(s2, beta))});
    m.Sxy = vec({u * c2 * erf1});
    m.Syx = vec({u * c1 * erf2});
    return m;
}

MomentSet burgers1d_moments(double u, double beta) { return scalar1d_moments(u, 0.5 * u, beta); }

MomentSet burgers2d_moments(double u, double c1, double c2, double beta) {
    return scalar2d_moments(u, c1, c2, beta);
}

ScalarCoefficients scalar_dtilde(double c1, double c2, double beta) {
    const double sb = std::sqrt(beta);
    const double s1 = c1 * sb, s2 = c2 * sb;
    const double erf1 = std::erf(s1), erf2 = std::erf(s2);
    return {c1 * erf1 + bhat(s1, beta), c2 * erf2 + bhat(s2, beta), c2 * erf1, c1 * erf2};
}

MomentSet euler1d_moments(const GasState1D& st) {
    st.validate();
    const KineticParams k = kinetic_params(st);
    const double rho = st.rho, u = st.u, p = st.p, E = st.E;
    const double erf = std::erf(k.s1), B = bhat(k.s1, k.beta);
    MomentSet m;
    m.U = st.conserved();
    m.G1 = vec({rho * u, p + rho * u * u, p * u + rho * u * E});
    m.Sx = vec({rho * u * erf + rho * B, (p + rho * u * u) * erf + rho * u * B,
                (p + rho * E) * u * erf + rho * (p / (2.0 * rho) + E) * B});
    return m;
}

MomentSet euler2d_moments(const GasState2D& st) {
    st.validate();
    const KineticParams k = kinetic_params(st);
    const double rho = st.rho, u1 = st.u1, u2 = st.u2, p = st.p, E = st.E, g = st.gamma;
    const double erf1 = std::erf(k.s1), erf2 = std::erf(k.s2);
    const double B1 = bhat(k.s1, k.beta), B2 = bhat(k.s2, k.beta);
    const double ke = 0.5 * rho * (u1 * u1 + u2 * u2);
    const double h_erf = g / (g - 1.0) * p + ke;               // ρE + p
    const double h_exp = (g + 1.0) / (2.0 * (g - 1.0)) * p + ke;
    const double rt = 0.5 / k.beta;
    MomentSet m;
    m.U = st.conserved();
    m.G1 = vec({rho * u1, p + rho * u1 * u1, rho * u1 * u2, (p + rho * E) * u1});
    m.G2 = vec({rho * u2, rho * u1 * u2, p + rho * u2 * u2, (p + rho * E) * u2});
    m.Sx = vec({rho * u1 * erf1 + rho * B1, (p + rho * u1 * u1) * erf1 + rho * u1 * B1,
                rho * u1 * u2 * erf1 + rho * u2 * B1, h_erf * u1 * erf1 + h_exp * B1});
    m.Sy = vec({rho * u2 * erf2 + rho * B2, rho * u1 * u2 * erf2 + rho * u1 * B2,
                (p + rho * u2 * u2) * erf2 + rho * u2 * B2, h_erf * u2 * erf2 + h_exp * B2});
    m.Sxy = vec({rho * u2 * erf1, rho * u2 * (B1 + u1 * erf1), rho * erf1 * (rt + u2 * u2),
                 u2 * erf1 * h_erf + 0.5 * rho * u1 * u2 * B1});
    m.Syx = vec({rho * u1 * erf2, rho * erf2 * (rt + u1 * u1), rho * u1 * (B2 + u2 * erf2),
                 u1 * erf2 * h_erf + 0.5 * rho * u1 * u2 * B2});
    return m;
}

StateMat jacobian_1d(const GasState1D& st) {
    st.validate();
    const double u = st.u, E = st.E, g = st.gamma;
    StateMat A = zero_mat(3);
    A << 0.0, 1.0, 0.0,
         0.5 * (g - 3.0) * u * u, (3.0 - g) * u, g - 1.0,
         (g - 1.0) * u * u * u - g * u * E, g * E - 1.5 * (g - 1.0) * u * u, g * u;
    return A;
}

Jacobians2D jacobians_2d(const GasState2D& st) {
    st.validate();
    const double u1 = st.u1, u2 = st.u2, E = st.E, g = st.gamma;
    const double q2 = u1 * u1 + u2 * u2;
    StateMat A1 = zero_mat(4), A2 = zero_mat(4);
    A1 << 0.0, 1.0, 0.0, 0.0,
          -u1 * u1 + 0.5 * (g - 1.0) * q2, (3.0 - g) * u1, -(g - 1.0) * u2, g - 1.0,
          -u1 * u2, u2, u1, 0.0,
          -(g * E - (g - 1.0) * q2) * u1, g * E - 0.5 * (g - 1.0) * (2.0 * u1 * u1 + q2), -(g - 1.0) * u1 * u2, g * u1;
    A2 << 0.0, 0.0, 1.0, 0.0,
          -u1 * u2, u2, u1, 0.0,
          -u2 * u2 + 0.5 * (g - 1.0) * q2, -(g - 1.0) * u1, (3.0 - g) * u2, g - 1.0,
          -(g * E - (g - 1.0) * q2) * u2, -(g - 1.0) * u1 * u2, g * E - 0.5 * (g - 1.0) * (2.0 * u2 * u2 + q2), g * u2;
    return {A1, A2};
}

StateMat dtilde_1d(const GasState1D& st) {
    st.validate();
    const KineticParams k = kinetic_params(st);
    const double erf = std::erf(k.s1);
    const double d = st.u * erf + bhat(k.s1, k.beta);
    const double pr = st.p / st.rho;
    StateMat D = zero_mat(3);
    D << d, 0.0, 0.0,
         pr * erf, d, 0.0,
         0.5 * pr * bhat(k.s1, k.beta), pr * erf, d;
    return D;
}

DTilde2D dtilde_2d(const GasState2D& st) {
    const MomentSet m = euler2d_moments(st);
    const KineticParams k = kinetic_params(st);
    const double rhoE = st.rho * st.E;
    require(rhoE > 0.0, ErrorCode::InvalidState, "total energy must be positive");
    const double erf1 = std::erf(k.s1), erf2 = std::erf(k.s2);
    const double d1 = st.u1 * erf1 + bhat(k.s1, k.beta);
    const double d2 = st.u2 * erf2 + bhat(k.s2, k.beta);
    const double pr = st.p / st.rho, rt = 0.5 / k.beta;
    DTilde2D D{zero_mat(4), zero_mat(4), zero_mat(4), zero_mat(4)};
    D.Dx << d1, 0.0, 0.0, 0.0,
            pr * erf1, d1, 0.0, 0.0,
            0.0, 0.0, d1, 0.0,
            0.0, 0.0, 0.0, m.Sx(3) / rhoE;
    D.Dy << d2, 0.0, 0.0, 0.0,
            0.0, d2, 0.0, 0.0,
            pr * erf2, 0.0, d2, 0.0,
            0.0, 0.0, 0.0, m.Sy(3) / rhoE;
    D.Dxy << st.u2 * erf1, 0.0, 0.0, 0.0,
             0.0, 0.0, d1, 0.0,
             erf1 * (rt + st.u2 * st.u2), 0.0, 0.0, 0.0,
             0.0, 0.0, 0.0, m.Sxy(3) / rhoE;
    D.Dyx << st.u1 * erf2, 0.0, 0.0, 0.0,
             erf2 * (rt + st.u1 * st.u1), 0.0, 0.0, 0.0,
             0.0, d2, 0.0, 0.0,
             0.0, 0.0, 0.0, m.Syx(3) / rhoE;
    return D;
}

// ---------------------------------------------------------------------------
// Quadrature oracle

namespace {

struct Rule {
    std::vector<double> x, w;
};

const Rule& hermite_rule(int n) {
    static std::mutex mutex;
    static std::map<int, Rule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(0.5 * k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
    Rule r;
    for (int k = 0; k < n; ++k) {
        r.x.push_back(eig.eigenvalues()(k));
        const double v0 = eig.eigenvectors()(0, k);
        r.w.push_back(std::sqrt(pi) * v0 * v0);
    }
    return cache.emplace(n, std::move(r)).first->second;
}

const Rule& legendre_rule(int n) {
    static std::mutex mutex;
    static std::map<int, Rule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    Rule r;
    gauss_legendre(n, r.x, r.w);
    return cache.emplace(n, std::move(r)).first->second;
}

// Nodes and weights for ∫ g(v) √(β/π) e^{-β(v-mean)²} [sign(v)] dv.
Rule velocity_axis(double mean, double beta, int order, bool signed_range) {
    Rule axis;
    const double sb = std::sqrt(beta);
    if (!signed_range) {
        const Rule& gh = hermite_rule(order);
        for (std::size_t k = 0; k < gh.x.size(); ++k) {
            axis.x.push_back(mean + gh.x[k] / sb);
            axis.w.push_back(gh.w[k] / std::sqrt(pi));
        }
        return axis;
    }
    const Rule& gl = legendre_rule(order);
    const double lo = mean - 8.0 / sb, hi = mean + 8.0 / sb;
    auto add = [&](double a, double b, double sign) {
        if (b <= a) return;
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        for (std::size_t k = 0; k < gl.x.size(); ++k) {
            const double v = mid + half * gl.x[k];
            const double dv = v - mean;
            axis.x.push_back(v);
            axis.w.push_back(sign * half * gl.w[k] * sb / std::sqrt(pi) * std::exp(-beta * dv * dv));
        }
    };
    add(lo, std::min(hi, 0.0), -1.0);
    add(std::max(lo, 0.0), hi, 1.0);
    return axis;
}

void check_order(int order) { require(order >= 16, ErrorCode::InvalidArgument, "oracle order must be at least 16"); }

}  // namespace

MomentSet moment_oracle_scalar1d(double u, double c, double beta, int order) {
    check_order(order);
    const Rule full = velocity_axis(c, beta, order, false);
    const Rule half = velocity_axis(c, beta, order, true);
    double U = 0.0, G = 0.0, S = 0.0;
    for (std::size_t k = 0; k < full.x.size(); ++k) {
        U += full.w[k] * u;
        G += full.w[k] * u * full.x[k];
    }
    for (std::size_t k = 0; k < half.x.size(); ++k) S += half.w[k] * u * half.x[k];
    MomentSet m;
    m.U = vec({U});
    m.G1 = vec({G});
    m.Sx = vec({S});
    return m;
}

MomentSet moment_oracle_scalar2d(double u, double c1, double c2, double beta, int order) {
    check_order(order);
    const Rule f1 = velocity_axis(c1, beta, order, false), h1 = velocity_axis(c1, beta, order, true);
    const Rule f2 = velocity_axis(c2, beta, order, false), h2 = velocity_axis(c2, beta, order, true);
    // ∫∫ w1(v1) w2(v2) g(v1, v2)
    auto integrate = [&](const Rule& a, const Rule& b, auto g) {
        double sum = 0.0;
        for (std::size_t i = 0; i < a.x.size(); ++i)
            for (std::size_t j = 0; j < b.x.size(); ++j) sum += a.w[i] * b.w[j] * g(a.x[i], b.x[j]);
        return u * sum;
    };
    auto one = [](double, double) { return 1.0; };
    auto v1 = [](double a, double) { return a; };
    auto v2 = [](double, double b) { return b; };
    MomentSet m;
    m.U = vec({integrate(f1, f2, one)});
    m.G1 = vec({integrate(f1, f2, v1)});
    m.G2 = vec({integrate(f1, f2, v2)});
    m.Sx = vec({integrate(h1, f2, v1)});
    m.Sy = vec({integrate(f1, h2, v2)});
    m.Sxy = vec({integrate(h1, f2, v2)});
    m.Syx = vec({integrate(f1, h2, v1)});
    return m;
}

MomentSet moment_oracle(const GasState1D& st, int order) {
    check_order(order);
    st.validate();
    const KineticParams k = kinetic_params(st);
    const Rule full = velocity_axis(st.u, k.beta, order, false);
    const Rule half = velocity_axis(st.u, k.beta, order, true);
    // Ψ = (1, v, I + v²/2); the I-integral of the normalized internal-energy factor gives I0.
    auto moments = [&](const Rule& r, bool times_v) {
        StateVec out = StateVec::Zero(3);
        for (std::size_t q = 0; q < r.x.size(); ++q) {
            const double v = r.x[q];
            const double w = r.w[q] * st.rho * (times_v ? v : 1.0);
            out(0) += w;
            out(1) += w * v;
            out(2) += w * (k.I0 + 0.5 * v * v);
        }
        return out;
    };
    MomentSet m;
    m.U = moments(full, false);
    m.G1 = moments(full, true);
    m.Sx = moments(half, true);
    return m;
}

MomentSet moment_oracle(const GasState2D& st, int order) {
    check_order(order);
    st.validate();
    const KineticParams k = kinetic_params(st);
    const Rule f1 = velocity_axis(st.u1, k.beta, order, false), h1 = velocity_axis(st.u1, k.beta, order, true);
    const Rule f2 = velocity_axis(st.u2, k.beta, order, false), h2 = velocity_axis(st.u2, k.beta, order, true);
    // weight selector: 0 → 1, 1 → v1, 2 → v2
    auto moments = [&](const Rule& a, const Rule& b, int times) {
        StateVec out = StateVec::Zero(4);
        for (std::size_t i = 0; i < a.x.size(); ++i)
            for (std::size_t j = 0; j < b.x.size(); ++j) {
                const double v1 = a.x[i], v2 = b.x[j];
                const double factor = times == 0 ? 1.0 : (times == 1 ? v1 : v2);
                const double w = a.w[i] * b.w[j] * st.rho * factor;
                out(0) += w;
                out(1) += w * v1;
                out(2) += w * v2;
                out(3) += w * (k.I0 + 0.5 * (v1 * v1 + v2 * v2));
            }
        return out;
    };
    MomentSet m;
    m.U = moments(f1, f2, 0);
    m.G1 = moments(f1, f2, 1);
    m.G2 = moments(f1, f2, 2);
    m.Sx = moments(h1, f2, 1);
    m.Sy = moments(f1, h2, 2);
    m.Sxy = moments(h1, f2, 2);
    m.Syx = moments(f1, h2, 1);
    return m;
}

}  // namespace ksupg
