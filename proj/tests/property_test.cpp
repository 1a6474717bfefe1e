#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "focalis/contact.hpp"
#include "focalis/curve.hpp"
#include "focalis/events.hpp"
#include "focalis/focal.hpp"
#include "focalis/linalg.hpp"

using namespace focalis;

namespace {

std::vector<std::string> random_fixtures() {
    std::vector<std::string> names;
    for (int seed = 4; seed <= 8; ++seed) {
        names.push_back("random_poly_r4:" + std::to_string(seed));
        names.push_back("random_closed_r3:" + std::to_string(seed));
    }
    return names;
}

}  // namespace

TEST_CASE("pointwise invariants on seeded random curves") {
    for (const std::string& name : random_fixtures()) {
        CurveModel c = builtin(name);
        const int m = c.m();
        for (double th : sample_grid(c, 40)) {
            Apparatus ap = apparatus_at(c, th);
            INFO(name, " theta=", th);

            // orthonormal frame, positive orientation
            for (size_t i = 0; i < ap.frenet.frame.size(); ++i)
                for (size_t j = i; j < ap.frenet.frame.size(); ++j)
                    CHECK(std::fabs(dot(ap.frenet.frame[i], ap.frenet.frame[j]) - (i == j ? 1.0 : 0.0)) < 1e-9);
            CHECK(det_laplace(ap.frenet.frame) == doctest::Approx(1.0).epsilon(1e-9));

            if (!ap.has_focal) continue;
            const FocalData& fo = ap.focal;

            // c_1 is the radius of curvature
            CHECK(fo.focal_curvatures[0] * ap.frenet.curvatures[0] == doctest::Approx(1.0).epsilon(1e-10));

            // hypersphere radius equals the distance to its center
            double d2 = 0.0;
            for (size_t j = 0; j < fo.center.size(); ++j)
                d2 += (fo.center[j] - ap.point[j]) * (fo.center[j] - ap.point[j]);
            CHECK(std::sqrt(d2) == doctest::Approx(fo.radii.back()).epsilon(1e-9));

            // radius derivative identity
            double lhs = 0.0;
            for (int j = 0; j < m; ++j)
                lhs += 2.0 * fo.focal_curvatures[static_cast<size_t>(j)] * fo.c_jets[static_cast<size_t>(j)].derivative(1);
            const double rhs = 2.0 * fo.focal_curvatures.back() * fo.vertex_residual;
            CHECK(lhs - rhs == doctest::Approx(0.0).epsilon(1e-9).scale(std::max(1.0, std::fabs(rhs))));

            // the focal curve leaves along the last normal
            const VecD& nm = ap.frenet.frame[static_cast<size_t>(m)];
            const double scale = std::max(1.0, std::fabs(fo.vertex_residual));
            for (int j = 0; j <= m; ++j)
                CHECK(std::fabs(fo.center_jets[j].derivative(1) - fo.vertex_residual * nm[static_cast<size_t>(j)]) /
                          scale < 1e-7);

            // both constructions of the focal curvatures agree
            std::vector<Jet> rec = focal_curvatures_recursive(ap.frenet);
            for (int i = 0; i < m; ++i) {
                const double a = fo.focal_curvatures[static_cast<size_t>(i)];
                CHECK(std::fabs(rec[static_cast<size_t>(i)].value() - a) / std::max(1.0, std::fabs(a)) < 1e-7);
            }
        }
    }
}

TEST_CASE("scaling equivariance") {
    CurveModel base = builtin("random_closed_r3:4");
    const double lambda = 2.5;
    CurveModel scaled = base;
    for (int j = 0; j < base.dimension; ++j)
        scaled.components[static_cast<size_t>(j)] =
            Expr::binary('*', Expr::number(lambda), base.components[static_cast<size_t>(j)]);

    for (double th : sample_grid(base, 15)) {
        Apparatus p = apparatus_at(base, th);
        Apparatus q = apparatus_at(scaled, th);
        REQUIRE(p.has_focal);
        REQUIRE(q.has_focal);
        for (size_t i = 0; i < p.frenet.curvatures.size(); ++i)
            CHECK(q.frenet.curvatures[i] == doctest::Approx(p.frenet.curvatures[i] / lambda).epsilon(1e-9));
        for (size_t i = 0; i < p.focal.focal_curvatures.size(); ++i)
            CHECK(q.focal.focal_curvatures[i] == doctest::Approx(p.focal.focal_curvatures[i] * lambda).epsilon(1e-9));
        for (size_t j = 0; j < p.focal.center.size(); ++j)
            CHECK(q.focal.center[j] == doctest::Approx(p.focal.center[j] * lambda).epsilon(1e-9));
        CHECK(q.speed == doctest::Approx(p.speed * lambda).epsilon(1e-10));
    }
}

TEST_CASE("seeded fixtures evaluate reproducibly") {
    CurveModel a = builtin("random_poly_r4:9");
    CurveModel b = builtin("random_poly_r4:9");
    for (double th : sample_grid(a, 10)) {
        Apparatus pa = apparatus_at(a, th);
        Apparatus pb = apparatus_at(b, th);
        for (size_t i = 0; i < pa.frenet.curvatures.size(); ++i)
            CHECK(pa.frenet.curvatures[i] == pb.frenet.curvatures[i]);  // bitwise
        if (pa.has_focal)
            for (size_t j = 0; j < pa.focal.center.size(); ++j)
                CHECK(pa.focal.center[j] == pb.focal.center[j]);
    }
}

TEST_CASE("closed space curves satisfy the vertex inequalities") {
    for (int seed = 4; seed <= 6; ++seed) {
        CurveModel c = builtin("random_closed_r3:" + std::to_string(seed));
        EventReport r = scan_events(c, 256);
        INFO("seed ", seed, ": V=", r.vertices, " P=", r.pseudo_vertices, " F=", r.flattenings);
        CHECK(r.vertices + r.pseudo_vertices >= 2);
        CHECK(r.vertices + r.pseudo_vertices >= r.flattenings);
    }
}

TEST_CASE("osculating hypersphere keeps its defining contact order") {
    CurveModel c = builtin("random_closed_r3:5");
    const int m = c.m();
    for (double th : sample_grid(c, 12)) {
        Apparatus ap = apparatus_at(c, th);
        if (!ap.has_focal) continue;
        ContactResult r = osculating_sphere_contact(c.eval_jet(th, 8), ap.frenet, ap.focal, m, 8);
        INFO("theta=", th);
        CHECK(r.order >= m + 2);
    }
}

TEST_CASE("vertex events pin the vertex residual to zero") {
    CurveModel c = builtin("random_closed_r3:6");
    EventReport r = scan_events(c, 256);
    for (const Event& e : r.events) {
        if (e.kind != EventKind::Vertex || !e.refined) continue;
        Apparatus ap = apparatus_at(c, e.theta);
        if (!ap.has_focal) continue;
        double scale = std::max(1.0, std::fabs(ap.focal.focal_curvatures.back()));
        CHECK(std::fabs(ap.focal.vertex_residual) / scale < 1e-7);
    }
}
