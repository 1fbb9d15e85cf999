#include "ksupg/exact.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ksupg/error.hpp"
#include "ksupg/fem.hpp"

namespace ksupg {

namespace {

struct SideFunction {
    double f;
    double df;
};

// Pressure function of one side and its derivative.
SideFunction pressure_function(double p, const GasState1D& s) {
    const double g = s.gamma;
    const double a = s.sound_speed();
    if (p > s.p) {
        const double A = 2.0 / ((g + 1.0) * s.rho);
        const double B = (g - 1.0) / (g + 1.0) * s.p;
        const double q = std::sqrt(A / (p + B));
        return {(p - s.p) * q, q * (1.0 - 0.5 * (p - s.p) / (p + B))};
    }
    const double ratio = p / s.p;
    return {2.0 * a / (g - 1.0) * (std::pow(ratio, (g - 1.0) / (2.0 * g)) - 1.0),
            std::pow(ratio, -(g + 1.0) / (2.0 * g)) / (s.rho * a)};
}

double theta_of_beta(double beta, double mach, double g) {
    const double m2s = mach * mach * std::sin(beta) * std::sin(beta);
    return std::atan(2.0 / std::tan(beta) * (m2s - 1.0) / (mach * mach * (g + std::cos(2.0 * beta)) + 2.0));
}

}  // namespace

RiemannSolution::RiemannSolution(const GasState1D& left, const GasState1D& right) : l_(left), r_(right) {
    l_.validate();
    r_.validate();
    require(left.gamma == right.gamma, ErrorCode::InvalidArgument, "both states must share gamma");
    const double g = left.gamma;
    const double al = l_.sound_speed(), ar = r_.sound_speed();
    const double du = r_.u - l_.u;
    require(2.0 * (al + ar) / (g - 1.0) > du, ErrorCode::VacuumFormation,
            "initial data generate a vacuum; the pressure function has no positive root");

    // Newton from the primitive-variable guess, kept positive.
    const double pv = 0.5 * (l_.p + r_.p) - 0.125 * du * (l_.rho + r_.rho) * (al + ar);
    double p = std::max(pv, 1e-8 * std::min(l_.p, r_.p));
    for (int it = 0; it < 200; ++it) {
        const SideFunction fl = pressure_function(p, l_), fr = pressure_function(p, r_);
        double next = p - (fl.f + fr.f + du) / (fl.df + fr.df);
        if (next <= 0.0) next = 0.1 * p;
        const double change = 2.0 * std::abs(next - p) / (next + p);
        p = next;
        if (change < 1e-14) break;
    }
    p_star_ = p;
    const SideFunction fl = pressure_function(p, l_), fr = pressure_function(p, r_);
    u_star_ = 0.5 * (l_.u + r_.u) + 0.5 * (fr.f - fl.f);

    auto star_density = [&](const GasState1D& s) {
        const double ratio = p / s.p;
        if (p > s.p) {
            const double k = (g - 1.0) / (g + 1.0);
            return s.rho * (ratio + k) / (k * ratio + 1.0);
        }
        return s.rho * std::pow(ratio, 1.0 / g);
    };
    rho_star_l_ = star_density(l_);
    rho_star_r_ = star_density(r_);
}

GasState1D RiemannSolution::sample(double xi) const {
    const double g = l_.gamma;
    const double gm = g - 1.0, gp = g + 1.0;
    auto make = [&](double rho, double u, double p) { return GasState1D::from_primitive(rho, u, p, g, l_.R); };

    if (xi <= u_star_) {
        const double a = l_.sound_speed();
        if (p_star_ > l_.p) {
            const double speed = l_.u - a * std::sqrt(gp / (2.0 * g) * p_star_ / l_.p + gm / (2.0 * g));
            return xi <= speed ? l_ : make(rho_star_l_, u_star_, p_star_);
        }
        const double head = l_.u - a;
        const double a_star = a * std::pow(p_star_ / l_.p, gm / (2.0 * g));
        const double tail = u_star_ - a_star;
        if (xi <= head) return l_;
        if (xi >= tail) return make(rho_star_l_, u_star_, p_star_);
        const double c = 2.0 / gp + gm / (gp * a) * (l_.u - xi);
        return make(l_.rho * std::pow(c, 2.0 / gm), 2.0 / gp * (a + 0.5 * gm * l_.u + xi),
                    l_.p * std::pow(c, 2.0 * g / gm));
    }
    const double a = r_.sound_speed();
    if (p_star_ > r_.p) {
        const double speed = r_.u + a * std::sqrt(gp / (2.0 * g) * p_star_ / r_.p + gm / (2.0 * g));
        return xi >= speed ? r_ : make(rho_star_r_, u_star_, p_star_);
    }
    const double head = r_.u + a;
    const double a_star = a * std::pow(p_star_ / r_.p, gm / (2.0 * g));
    const double tail = u_star_ + a_star;
    if (xi >= head) return r_;
    if (xi <= tail) return make(rho_star_r_, u_star_, p_star_);
    const double c = 2.0 / gp - gm / (gp * a) * (r_.u - xi);
    return make(r_.rho * std::pow(c, 2.0 / gm), 2.0 / gp * (-a + 0.5 * gm * r_.u + xi),
                r_.p * std::pow(c, 2.0 * g / gm));
}

GasState1D exact_riemann(const GasState1D& left, const GasState1D& right, double x_over_t) {
    return RiemannSolution(left, right).sample(x_over_t);
}

double burgers2d_exact(double x, double y) {
    if (y < 0.5 && std::abs(x - 0.5) < 0.5 - y) return (1.0 - 2.0 * x) / (1.0 - 2.0 * y);
    return x < 0.5 ? 1.0 : -1.0;
}

ObliqueShock oblique_shock_oracle(double mach, double theta, double g) {
    require(mach > 1.0 && g > 1.0 && theta >= 0.0, ErrorCode::InvalidArgument,
            "oblique shock needs supersonic flow and a non-negative deflection");
    const double mu = std::asin(1.0 / mach);
    // θ(β) rises from 0 at the Mach angle to its maximum, then falls to 0 at π/2.
    double a = mu, b = 0.5 * M_PI;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 200; ++it) {
        const double c = b - phi * (b - a), d = a + phi * (b - a);
        if (theta_of_beta(c, mach, g) > theta_of_beta(d, mach, g))
            b = d;
        else
            a = c;
    }
    const double beta_max = 0.5 * (a + b);
    require(theta <= theta_of_beta(beta_max, mach, g), ErrorCode::DetachedShock,
            "deflection exceeds the maximum for an attached shock");
    double lo = mu, hi = beta_max;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        (theta_of_beta(mid, mach, g) < theta ? lo : hi) = mid;
    }
    ObliqueShock s;
    s.beta = theta == 0.0 ? mu : 0.5 * (lo + hi);
    const double mn2 = std::pow(mach * std::sin(s.beta), 2);
    s.pressure_ratio = 1.0 + 2.0 * g / (g + 1.0) * (mn2 - 1.0);
    s.density_ratio = (g + 1.0) * mn2 / ((g - 1.0) * mn2 + 2.0);
    const double mn_after = std::sqrt((1.0 + 0.5 * (g - 1.0) * mn2) / (g * mn2 - 0.5 * (g - 1.0)));
    s.mach_after = mn_after / std::sin(s.beta - theta);
    return s;
}

ShockReflection two_shock_reflection(double mach, double theta, double g) {
    ShockReflection r;
    r.incident = oblique_shock_oracle(mach, theta, g);
    r.reflected = oblique_shock_oracle(r.incident.mach_after, theta, g);
    r.p2_over_p1 = r.incident.pressure_ratio;
    r.p3_over_p1 = r.incident.pressure_ratio * r.reflected.pressure_ratio;
    return r;
}

double billig_standoff(double mach) {
    require(mach > 1.0, ErrorCode::InvalidArgument, "standoff correlation needs supersonic flow");
    return 0.386 * std::exp(4.67 / (mach * mach));
}

std::vector<double> pressure_gradient_magnitude(const ConservedField& field) {
    const Mesh& mesh = field.mesh();
    require(mesh.dim() == 2, ErrorCode::InvalidArgument, "pressure gradient needs a 2D field");
    std::vector<double> p(mesh.node_count());
    for (Index i = 0; i < p.size(); ++i) p[i] = field.pressure(i);
    std::vector<double> gx(p.size(), 0.0), gy(p.size(), 0.0), weight(p.size(), 0.0);
    for (Index e = 0; e < mesh.element_count(); ++e) {
        const Element& el = mesh.element(e);
        const Vec2 centre = el.kind == ElementKind::T3 ? Vec2{1.0 / 3.0, 1.0 / 3.0} : Vec2{0.0, 0.0};
        const PhysicalShape s = physical_shape(el, mesh, centre);
        double ex = 0.0, ey = 0.0;
        const auto verts = el.vertices();
        for (std::size_t a = 0; a < verts.size(); ++a) {
            ex += s.grad[a][0] * p[verts[a]];
            ey += s.grad[a][1] * p[verts[a]];
        }
        const double area = mesh.element_measure(e);
        for (Index v : verts) {
            gx[v] += area * ex;
            gy[v] += area * ey;
            weight[v] += area;
        }
    }
    std::vector<double> g(p.size());
    for (Index i = 0; i < g.size(); ++i) g[i] = std::hypot(gx[i], gy[i]) / weight[i];
    return g;
}

double measure_shock_angle(const ConservedField& field, const Window& w) {
    const Mesh& mesh = field.mesh();
    const std::vector<double> grad = pressure_gradient_magnitude(field);
    std::vector<Index> inside;
    for (Index i = 0; i < mesh.node_count(); ++i) {
        const Node& n = mesh.node(i);
        if (n.x >= w.x0 && n.x <= w.x1 && n.y >= w.y0 && n.y <= w.y1) inside.push_back(i);
    }
    require(!inside.empty(), ErrorCode::NoShockDetected, "window contains no nodes");
    std::vector<double> values;
    for (Index i : inside) values.push_back(grad[i]);
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2), values.end());
    const double background = values[values.size() / 2];
    // Gradients below this are roundoff on a (nearly) uniform field, not a jump.
    double p_max = 0.0;
    for (Index i : inside) p_max = std::max(p_max, std::abs(field.pressure(i)));
    const double noise = 1e-9 * p_max / std::hypot(w.x1 - w.x0, w.y1 - w.y0);

    // Columns are nodes sharing an x coordinate up to a small fraction of the window width.
    const double quantum = 1e-9 * std::max(1.0, w.x1 - w.x0);
    std::map<long long, Index> peak;
    for (Index i : inside) {
        const long long key = std::llround(mesh.node(i).x / quantum);
        auto it = peak.find(key);
        if (it == peak.end() || grad[i] > grad[it->second]) peak[key] = i;
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t count = 0;
    for (const auto& [key, i] : peak) {
        if (grad[i] <= 3.0 * background || grad[i] <= noise) continue;
        const double x = mesh.node(i).x, y = mesh.node(i).y;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    require(count >= 3, ErrorCode::NoShockDetected, "no pressure jump stands out in the window");
    const double nc = static_cast<double>(count);
    const double denom = nc * sxx - sx * sx;
    require(denom > 0.0, ErrorCode::NoShockDetected, "shock locus is degenerate");
    const double slope = (nc * sxy - sx * sy) / denom;
    return std::atan(std::abs(slope)) * 180.0 / M_PI;
}

}  // namespace ksupg
