#include "ksupg/cases.hpp"

#include <chrono>
#include <cmath>

#include "ksupg/error.hpp"
#include "ksupg/exact.hpp"
#include "ksupg/io.hpp"

namespace ksupg {

namespace {

constexpr double kDeg = M_PI / 180.0;

StateFunction constant(StateVec U) {
    return [U](double, double) { return U; };
}

StateVec scalar(double u) {
    StateVec U(1);
    U(0) = u;
    return U;
}

StateVec euler1d(double rho, double u, double p, const GasModel& gas) {
    return GasState1D::from_primitive(rho, u, p, gas.gamma, gas.R).conserved();
}

StateVec euler2d(double rho, double u, double v, double p, const GasModel& gas) {
    return GasState2D::from_primitive(rho, u, v, p, gas.gamma, gas.R).conserved();
}

std::function<Mesh(Index, Index, bool)> line_mesh(double x0, double x1) {
    return [x0, x1](Index n, Index, bool) {
        return build_line_mesh(n, x0, x1).retagged(
            {{"left", BoundaryTag::SupersonicOutflow}, {"right", BoundaryTag::SupersonicOutflow}});
    };
}

std::function<Mesh(Index, Index, bool)> rect_mesh(Rect domain, std::map<std::string, BoundaryTag> tags) {
    return [domain, tags](Index nx, Index ny, bool triangles) {
        const Mesh mesh = triangles ? build_structured_tri_mesh(nx, ny, domain) : build_structured_quad_mesh(nx, ny, domain);
        return mesh.retagged(tags);
    };
}

CaseSpec riemann_case(std::string name, std::string summary, double x0, double x1, double xm, Index nodes,
                      std::array<double, 3> left, std::array<double, 3> right, double R, double cfl,
                      double final_time) {
    CaseSpec c;
    c.name = std::move(name);
    c.summary = std::move(summary);
    c.equation = Equation::Euler1D;
    c.gas = {1.4, R};
    c.nx = nodes;
    c.mesh = line_mesh(x0, x1);
    const StateVec UL = euler1d(left[0], left[1], left[2], c.gas), UR = euler1d(right[0], right[1], right[2], c.gas);
    c.initial = [UL, UR, xm](double x, double) { return x < xm ? UL : UR; };
    c.config.cfl = cfl;
    c.config.final_time = final_time;
    c.implicit_cfl = 0.6;
    return c;
}

std::vector<CaseSpec> build_registry() {
    std::vector<CaseSpec> cases;

    {
        CaseSpec c;
        c.name = "burgers1d_square";
        c.summary = "1D Burgers square wave: expansion through a sonic point and a steady shock";
        c.equation = Equation::Burgers1D;
        c.nx = 50;
        c.mesh = line_mesh(-1.0, 1.0);
        c.initial = [](double x, double) { return scalar(std::abs(x) < 1.0 / 3.0 ? 1.0 : -1.0); };
        c.config.cfl = 0.3;
        c.config.final_time = 0.3;
        c.implicit_cfl = 0.3;
        cases.push_back(std::move(c));
    }

    cases.push_back(riemann_case("sod", "Sod shock tube in dimensional units", -10.0, 10.0, 0.0, 100,
                                 {1.0, 0.0, 100000.0}, {0.125, 0.0, 10000.0}, 287.0, 0.15, 0.01));
    cases.push_back(riemann_case("lax", "Lax shock tube", 0.0, 1.0, 0.5, 100, {0.445, 0.698, 3.528},
                                 {0.5, 0.0, 0.571}, 1.0, 0.1, 0.13));
    cases.push_back(riemann_case("strong_rarefaction", "Two strong rarefactions leaving a near vacuum", 0.0, 1.0,
                                 0.5, 200, {1.0, -0.2, 0.4}, {1.0, 2.0, 0.4}, 1.0, 0.1, 0.15));

    {
        CaseSpec c;
        c.name = "burgers2d";
        c.summary = "Steady 2D Burgers with a normal shock on the unit square";
        c.equation = Equation::Burgers2D;
        c.nx = 32;
        c.ny = 32;
        c.mesh = rect_mesh({0.0, 1.0, 0.0, 1.0}, {{"left", BoundaryTag::Dirichlet},
                                                  {"right", BoundaryTag::Dirichlet},
                                                  {"bottom", BoundaryTag::Dirichlet},
                                                  {"top", BoundaryTag::SupersonicOutflow}});
        c.initial = [](double x, double) { return scalar(1.0 - 2.0 * x); };
        c.boundary.values["left"] = constant(scalar(1.0));
        c.boundary.values["right"] = constant(scalar(-1.0));
        c.boundary.values["bottom"] = [](double x, double) { return scalar(1.0 - 2.0 * x); };
        c.config.cfl = 0.1;
        c.config.steady_tol = 1e-5;
        c.config.max_steps = 20000;
        c.implicit_cfl = 1.0;
        c.steady = true;
        cases.push_back(std::move(c));
    }

    {
        CaseSpec c;
        c.name = "oblique_shock";
        c.summary = "Mach 2 flow turned by a wall, attached oblique shock";
        c.equation = Equation::Euler2D;
        c.nx = 40;
        c.ny = 40;
        c.mach = 2.0;
        c.mesh = rect_mesh({0.0, 1.0, 0.0, 1.0}, {{"left", BoundaryTag::Dirichlet},
                                                  {"top", BoundaryTag::Dirichlet},
                                                  {"bottom", BoundaryTag::Wall},
                                                  {"right", BoundaryTag::SupersonicOutflow}});
        const StateVec U = euler2d(1.0, std::cos(10.0 * kDeg), -std::sin(10.0 * kDeg), 0.179, c.gas);
        c.initial = constant(U);
        c.boundary.values["left"] = constant(U);
        c.boundary.values["top"] = constant(U);
        c.config.cfl = 0.25;
        c.config.shock_capturing = true;
        c.config.steady_tol = std::pow(10.0, -3.5);
        c.config.max_steps = 20000;
        c.steady = true;
        cases.push_back(std::move(c));
    }

    {
        CaseSpec c;
        c.name = "shock_reflection";
        c.summary = "Oblique shock reflecting from a flat plate";
        c.equation = Equation::Euler2D;
        c.nx = 60;
        c.ny = 20;
        c.mach = 2.9;
        c.mesh = rect_mesh({0.0, 3.0, 0.0, 1.0}, {{"left", BoundaryTag::SupersonicInflow},
                                                  {"top", BoundaryTag::Dirichlet},
                                                  {"bottom", BoundaryTag::Wall},
                                                  {"right", BoundaryTag::SupersonicOutflow}});
        const StateVec inflow = euler2d(1.0, 2.9, 0.0, 1.0 / 1.4, c.gas);
        const StateVec post = euler2d(1.69997, 2.61934, -0.50633, 1.52819, c.gas);
        c.initial = constant(inflow);
        c.boundary.values["left"] = constant(inflow);
        c.boundary.values["top"] = constant(post);
        // set names used by triangle mesh files, which are named after their tags
        c.boundary.values["SupersonicInflow"] = constant(inflow);
        c.boundary.values["Dirichlet"] = constant(post);
        c.config.cfl = 0.25;
        c.config.shock_capturing = true;
        c.config.steady_tol = std::pow(10.0, -3.5);
        c.config.max_steps = 20000;
        c.steady = true;
        cases.push_back(std::move(c));
    }

    cases.push_back(half_cylinder_case(2.0));
    return cases;
}

Mesh build_case_mesh(const CaseSpec& spec, const CaseOverrides& o) {
    if (o.mesh_file) return load_triangle_mesh(*o.mesh_file);
    const Index nx = o.nx.value_or(spec.nx);
    const Index ny = o.ny.value_or(o.nx && !o.ny && dimension(spec.equation) == 2 ? spec.ny * *o.nx / spec.nx : spec.ny);
    require(!o.triangles || dimension(spec.equation) == 2, ErrorCode::InvalidArgument,
            "triangular meshes are only available for 2D cases");
    return spec.mesh(nx, ny, o.triangles);
}

std::string strip_code(const Error& e) {
    const std::string what = e.what();
    const std::string prefix = std::string(to_string(e.code())) + ": ";
    return what.rfind(prefix, 0) == 0 ? what.substr(prefix.size()) : what;
}

}  // namespace

CaseSpec half_cylinder_case(double mach) {
    require(mach > 1.0, ErrorCode::InvalidArgument, "half-cylinder case needs supersonic inflow");
    CaseSpec c;
    c.name = "half_cylinder";
    c.summary = "Bow shock ahead of a half cylinder";
    c.equation = Equation::Euler2D;
    c.nx = 46;
    c.ny = 46;
    c.mach = mach;
    c.mesh = [](Index nx, Index ny, bool triangles) {
        require(!triangles, ErrorCode::InvalidArgument, "the half-cylinder case is quadrilateral only");
        return build_half_cylinder_mesh(nx, ny, 1.0, 3.0);
    };
    const StateVec U = euler2d(1.0, mach, 0.0, 1.0 / 1.4, c.gas);
    c.initial = constant(U);
    c.boundary.values["inflow"] = constant(U);
    c.config.cfl = 0.25;
    c.config.shock_capturing = true;
    c.config.steady_tol = std::pow(10.0, -3.5);
    c.config.max_steps = 20000;
    c.steady = true;
    return c;
}

const std::vector<CaseSpec>& case_registry() {
    static const std::vector<CaseSpec> registry = build_registry();
    return registry;
}

const CaseSpec& find_case(const std::string& name) {
    for (const auto& c : case_registry())
        if (c.name == name) return c;
    fail(ErrorCode::NotFound, "no case named '" + name + "'");
}

PreparedCase prepare_case(const std::string& name, const CaseOverrides& o) {
    CaseSpec spec = find_case(name);
    if (o.mach) {
        require(name == "half_cylinder", ErrorCode::InvalidArgument, "only the half-cylinder case takes a Mach number");
        spec = half_cylinder_case(*o.mach);
    }
    SolverConfig& cfg = spec.config;
    if (o.theta) {
        cfg.theta = *o.theta;
        if (*o.theta > 0.0) cfg.cfl = spec.implicit_cfl;
    }
    if (o.cfl) cfg.cfl = *o.cfl;
    if (o.steady_tol) cfg.steady_tol = *o.steady_tol;
    if (o.final_time) cfg.final_time = *o.final_time;
    if (o.shock_capturing) cfg.shock_capturing = *o.shock_capturing;
    if (o.mass_lumping) cfg.mass_lumping = *o.mass_lumping;
    if (o.jacobi) cfg.jacobi = *o.jacobi;
    if (o.max_steps) cfg.max_steps = *o.max_steps;
    if (o.sensor_frame) cfg.sensor_frame = *o.sensor_frame;
    if (o.cross) cfg.cross = *o.cross;
    cfg.validate();

    auto mesh = std::make_shared<const Mesh>(build_case_mesh(spec, o));
    require(mesh->dim() == dimension(spec.equation), ErrorCode::InvalidArgument, "mesh dimension does not fit the case");
    const std::size_t m = component_count(spec.equation);
    auto solver = std::make_shared<const Solver>(mesh, BoundaryPlan(*mesh, m, spec.boundary), cfg);
    ConservedField field(mesh, spec.equation, spec.gas, spec.flux);
    for (Index i = 0; i < mesh->node_count(); ++i) field.set_node(i, spec.initial(mesh->node(i).x, mesh->node(i).y));
    solver->boundaries().apply(field);
    return {std::move(spec), std::move(mesh), std::move(solver), std::move(field)};
}

RunResult march(PreparedCase& p) {
    return p.spec.steady ? p.solver->run_steady(p.field) : p.solver->run_transient(p.field);
}

RunArtifacts run_case(const std::string& name, const CaseOverrides& overrides, const OutputOptions& output) {
    try {
        const auto start = std::chrono::steady_clock::now();
        PreparedCase p = prepare_case(name, overrides);
        RunArtifacts a;
        a.case_name = name;
        a.config = p.solver->config();
        a.run = march(p);
        a.iterations = a.run.history.size();
        a.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (name == "oblique_shock") {
            try {
                a.shock_angle = measure_shock_angle(p.field, {0.1, 0.9, 0.0, 1.0});
            } catch (const Error&) {
            }
        }
        if (output.directory) {
            const auto& dir = *output.directory;
            if (output.csv) {
                a.files.push_back(dir / (name + "_field.csv"));
                write_csv(p.field, a.files.back());
                a.files.push_back(dir / (name + "_residue.csv"));
                write_csv(a.run.history, a.files.back());
            }
            if (output.vtk && p.mesh->dim() == 2) {
                a.files.push_back(dir / (name + ".vtk"));
                write_vtk(p.field, a.files.back());
            }
        }
        a.field = std::make_unique<ConservedField>(std::move(p.field));
        return a;
    } catch (const Error& e) {
        throw Error(e.code(), "case '" + name + "': " + strip_code(e));
    }
}

}  // namespace ksupg
