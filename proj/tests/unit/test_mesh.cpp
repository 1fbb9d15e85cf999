#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numeric>
#include <sstream>

#include "ksupg/error.hpp"
#include "ksupg/fem.hpp"
#include "ksupg/mesh.hpp"

using namespace ksupg;

namespace {

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an ksupg::Error");
    return ErrorCode::InvalidArgument;
}

double total_measure(const Mesh& m) {
    double s = 0.0;
    for (Index e = 0; e < m.element_count(); ++e) s += m.element_measure(e);
    return s;
}

}  // namespace

TEST_SUITE("mesh") {
    TEST_CASE("line mesh spacing") {
        const Mesh m = build_line_mesh(3, 0.0, 1.0);
        REQUIRE(m.node_count() == 3);
        CHECK(m.node(1).x == doctest::Approx(0.5));
        CHECK(m.element_count() == 2);
        CHECK(m.element(0).h == doctest::Approx(0.5));

        const Mesh sod = build_line_mesh(100, -10.0, 10.0);
        CHECK(sod.element_count() == 99);
        CHECK(sod.element(42).h == doctest::Approx(20.0 / 99.0));

        const Mesh one = build_line_mesh(2, 0.0, 1.0);
        CHECK(one.element_count() == 1);
        CHECK(one.element(0).h == doctest::Approx(1.0));

        CHECK(code_of([] { build_line_mesh(1, 0.0, 1.0); }) == ErrorCode::InvalidArgument);
        CHECK(code_of([] { build_line_mesh(5, 1.0, 1.0); }) == ErrorCode::InvalidArgument);
    }

    TEST_CASE("line mesh boundary normals point outward") {
        const Mesh m = build_line_mesh(5, 0.0, 1.0);
        const BoundarySet* left = m.find_boundary("left");
        const BoundarySet* right = m.find_boundary("right");
        REQUIRE(left);
        REQUIRE(right);
        CHECK(left->normals[0][0] == -1.0);
        CHECK(right->normals[0][0] == 1.0);
        CHECK(m.find_boundary("top") == nullptr);
    }

    TEST_CASE("structured quad counts and areas") {
        const Mesh one = build_structured_quad_mesh(1, 1, {});
        CHECK(one.node_count() == 4);
        CHECK(one.element_count() == 1);
        CHECK(one.element(0).h == doctest::Approx(1.0));

        const Mesh m32 = build_structured_quad_mesh(32, 32, {0, 1, 0, 1});
        CHECK(m32.node_count() == 1089);
        CHECK(m32.element_count() == 1024);
        CHECK(total_measure(m32) == doctest::Approx(1.0).epsilon(1e-12));

        const Mesh m60 = build_structured_quad_mesh(60, 20, {0, 3, 0, 1});
        CHECK(m60.node_count() == 1281);
        CHECK(m60.element_count() == 1200);
        CHECK(total_measure(m60) == doctest::Approx(3.0).epsilon(1e-12));

        for (const char* side : {"bottom", "right", "top", "left"}) CHECK(m60.find_boundary(side) != nullptr);
        CHECK(m60.find_boundary("bottom")->nodes.size() == 61);
        CHECK(m60.find_boundary("left")->nodes.size() == 21);
        CHECK(code_of([] { build_structured_quad_mesh(0, 3, {}); }) == ErrorCode::InvalidArgument);
    }

    TEST_CASE("positive Jacobian at every quadrature point") {
        for (const Mesh& m : {build_structured_quad_mesh(6, 4, {0, 3, 0, 1}),
                              build_structured_tri_mesh(6, 4, {0, 3, 0, 1}, 0.2, 3),
                              build_half_cylinder_mesh(8, 5, 1.0, 3.0)}) {
            for (const Element& el : m.elements()) {
                const QuadratureRule q = quadrature_rule(el.kind);
                for (const Vec2& p : q.points) CHECK(physical_shape(el, m, p).det_j > 0.0);
            }
        }
    }

    TEST_CASE("structured triangles cover the rectangle") {
        const Mesh t = build_structured_tri_mesh(5, 3, {0, 2, 0, 1});
        CHECK(t.element_count() == 30);
        CHECK(t.node_count() == 24);
        CHECK(total_measure(t) == doctest::Approx(2.0).epsilon(1e-12));

        const Mesh jittered = build_structured_tri_mesh(5, 3, {0, 2, 0, 1}, 0.2, 11);
        CHECK(total_measure(jittered) == doctest::Approx(2.0).epsilon(1e-12));
        const Mesh again = build_structured_tri_mesh(5, 3, {0, 2, 0, 1}, 0.2, 11);
        for (Index i = 0; i < jittered.node_count(); ++i) CHECK(jittered.node(i).x == again.node(i).x);
    }

    TEST_CASE("element size is the shortest edge") {
        const Mesh quad = build_structured_quad_mesh(1, 1, {});
        CHECK(element_size(quad.element(0), quad) == doctest::Approx(1.0));
        const Mesh line = build_line_mesh(2, 0.0, 0.5);
        CHECK(element_size(line.element(0), line) == doctest::Approx(0.5));
        const Mesh tri(2, {{0, 0, 0}, {1, 2, 0}, {2, 0, 1}}, {{0, ElementKind::T3, {0, 1, 2, 0}, 0.0}}, {});
        CHECK(element_size(tri.element(0), tri) == doctest::Approx(1.0));

        // same triangle, nodes listed in another order
        const Mesh perm(2, {{0, 0, 1}, {1, 0, 0}, {2, 2, 0}}, {{0, ElementKind::T3, {2, 0, 1, 0}, 0.0}}, {});
        CHECK(element_size(perm.element(0), perm) == doctest::Approx(1.0));
    }

    TEST_CASE("degenerate elements are rejected") {
        CHECK(code_of([] {
                  Mesh(2, {{0, 0, 0}, {1, 1, 0}, {2, 2, 0}}, {{0, ElementKind::T3, {0, 1, 2, 0}, 0.0}}, {});
              }) == ErrorCode::DegenerateElement);
        CHECK(code_of([] {
                  Mesh(2, {{0, 0, 0}, {1, 1, 0}}, {{0, ElementKind::T3, {0, 1, 5, 0}, 0.0}}, {});
              }) == ErrorCode::TopologyError);
    }

    TEST_CASE("triangle file: orientation, comments and errors") {
        std::istringstream ccw("# unit right triangle\n3 1 0\n0 0 0\n1 1 0\n2 0 1\n0 0 1 2\n");
        const Mesh a = parse_triangle_mesh(ccw);
        CHECK(a.element_count() == 1);
        CHECK(a.element_measure(0) == doctest::Approx(0.5));

        std::istringstream cw("3 1 0\n0 0 0\n1 1 0\n2 0 1\n0 0 2 1\n");
        const Mesh b = parse_triangle_mesh(cw);
        CHECK(b.element_measure(0) == doctest::Approx(0.5));
        CHECK(physical_shape(b.element(0), b, {1.0 / 3.0, 1.0 / 3.0}).det_j > 0.0);

        std::istringstream missing("3 1 0\n0 0 0\n1 1 0\n2 0 1\n0 0 1 99\n");
        CHECK(code_of([&] { parse_triangle_mesh(missing); }) == ErrorCode::TopologyError);

        std::istringstream garbage("3 1 0\n0 0 0\n1 one 0\n");
        try {
            parse_triangle_mesh(garbage);
            FAIL("expected a parse error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::ParseError);
            CHECK(std::string(e.what()).find("line 3") != std::string::npos);
        }
    }

    TEST_CASE("triangle file round trip keeps boundary sets") {
        const Mesh m = build_structured_tri_mesh(4, 2, {0, 2, 0, 1}, 0.1, 5)
                           .retagged({{"bottom", BoundaryTag::Wall}, {"left", BoundaryTag::SupersonicInflow}});
        const auto path = std::filesystem::temp_directory_path() / "ksupg_mesh_roundtrip.mesh";
        write_triangle_mesh(m, path);
        const Mesh r = load_triangle_mesh(path);
        std::filesystem::remove(path);
        REQUIRE(r.node_count() == m.node_count());
        REQUIRE(r.element_count() == m.element_count());
        for (Index i = 0; i < m.node_count(); ++i) {
            CHECK(r.node(i).x == m.node(i).x);
            CHECK(r.node(i).y == m.node(i).y);
        }
        REQUIRE(r.boundaries().size() == m.boundaries().size());
        bool saw_wall = false;
        for (const BoundarySet& s : r.boundaries()) saw_wall |= s.tag == BoundaryTag::Wall;
        CHECK(saw_wall);
        CHECK(code_of([] { load_triangle_mesh("/nonexistent/dir/mesh.txt"); }) == ErrorCode::IoError);
    }

    TEST_CASE("corner normals average the two sides") {
        const Mesh m = build_structured_quad_mesh(2, 2, {});
        const std::vector<Index> corner_and_side{0, 1, 2};  // bottom row
        const auto n = boundary_normals(m, corner_and_side);
        CHECK(n[1][0] == doctest::Approx(0.0));
        CHECK(n[1][1] == doctest::Approx(-1.0));
        const std::vector<Index> both{0, 1, 3};  // two sides meeting at node 0
        const auto c = boundary_normals(m, both);
        CHECK(c[0][0] == doctest::Approx(-std::sqrt(0.5)));
        CHECK(c[0][1] == doctest::Approx(-std::sqrt(0.5)));
    }

    TEST_CASE("retagging unknown sets fails") {
        const Mesh m = build_structured_quad_mesh(2, 2, {});
        CHECK(code_of([&] { m.retagged({{"nowhere", BoundaryTag::Wall}}); }) == ErrorCode::MissingTag);
        CHECK(parse_boundary_tag("Wall") == BoundaryTag::Wall);
        CHECK(code_of([] { parse_boundary_tag("Sideways"); }) == ErrorCode::ParseError);
    }

    TEST_CASE("neighbours of a structured grid") {
        const Mesh m = build_structured_quad_mesh(3, 3, {});
        const auto nb = m.node_neighbors();
        CHECK(nb[5].size() == 8);  // interior node
        CHECK(nb[0].size() == 3);  // corner
        CHECK(m.boundary_edges().size() == 12);
    }
}
