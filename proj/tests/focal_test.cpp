#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "focalis/curve.hpp"
#include "focalis/focal.hpp"
#include "focalis/frenet.hpp"

using namespace focalis;

namespace {

double vec_dist(const VecD& a, const VecD& b) {
    double worst = 0.0;
    for (size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::fabs(a[j] - b[j]));
    return worst;
}

}  // namespace

TEST_CASE("helix focal data in closed form") {
    CurveModel c = builtin("helix");
    for (double th : {0.0, 0.9, 2.5, 5.1}) {
        Apparatus ap = apparatus_at(c, th);
        REQUIRE(ap.has_focal);
        const FocalData& fo = ap.focal;
        CHECK(fo.focal_curvatures[0] == doctest::Approx(2.0).epsilon(1e-13));
        CHECK(std::fabs(fo.focal_curvatures[1]) < 1e-13);
        CHECK(fo.radii[0] == doctest::Approx(2.0).epsilon(1e-13));
        CHECK(fo.radii[1] == doctest::Approx(2.0).epsilon(1e-13));
        CHECK(vec_dist(fo.center, {-std::cos(th), -std::sin(th), th}) < 1e-12);
        CHECK(fo.vertex_residual == doctest::Approx(1.0).epsilon(1e-12));
        // c_2 = 0 makes the last-row correction 0/0; at theta = 0 both sides
        // are exact zeros and it surfaces as NaN
        if (th == 0.0) CHECK(std::isnan(fo.correcting_term));
        // gamma_1 already hits the axis cylinder, gamma_2 = center
        CHECK(vec_dist(fo.partial_centers[0], fo.center) < 1e-12);
        CHECK(vec_dist(fo.partial_centers[1], fo.center) < 1e-12);
        for (int j = 0; j < 3; ++j)
            CHECK(fo.center_jets[j].value() == doctest::Approx(fo.center[static_cast<size_t>(j)]).epsilon(1e-13));
    }
}

TEST_CASE("unit circle focal data") {
    Apparatus ap = apparatus_at(builtin("unit_circle"), 1.3);
    REQUIRE(ap.has_focal);
    CHECK(ap.focal.focal_curvatures[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(vec_dist(ap.focal.center, {0.0, 0.0}) < 1e-13);
    CHECK(std::fabs(ap.focal.vertex_residual) < 1e-12);
}

TEST_CASE("ellipse evolute in closed form") {
    // evolute of (2 cos t, sin t) is (1.5 cos^3 t, -3 sin^3 t)
    CurveModel c = builtin("ellipse_2_1");
    for (double th : {0.4, 1.9, 3.7}) {
        Apparatus ap = apparatus_at(c, th);
        const double x = 1.5 * std::pow(std::cos(th), 3.0);
        const double y = -3.0 * std::pow(std::sin(th), 3.0);
        CHECK(vec_dist(ap.focal.center, {x, y}) < 1e-12);
    }
}

TEST_CASE("spherical curve centers sit at the sphere center") {
    CurveModel c = builtin("sphere_curve_r3");
    for (double th : sample_grid(c, 20)) {
        Apparatus ap = apparatus_at(c, th);
        if (!ap.has_focal) continue;  // flattenings happen on this fixture
        CHECK(vec_dist(ap.focal.center, {0.0, 0.0, 0.0}) < 1e-8);
        CHECK(ap.focal.radii.back() == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(std::fabs(ap.focal.vertex_residual) < 1e-9);
    }
}

TEST_CASE("recursive focal curvatures match the linear solve") {
    for (const char* name : {"trefoil_like", "random_poly_r4:1", "helix"}) {
        CurveModel c = builtin(name);
        const int m = c.m();
        for (double th : sample_grid(c, 20)) {
            Apparatus ap = apparatus_at(c, th);
            if (!ap.has_focal) continue;
            std::vector<Jet> rec = focal_curvatures_recursive(ap.frenet);
            for (int i = 0; i < m; ++i) {
                const double a = ap.focal.focal_curvatures[static_cast<size_t>(i)];
                const double scale = std::max(1.0, std::fabs(a));
                INFO(name, " theta=", th, " c_", i + 1);
                CHECK(std::fabs(rec[static_cast<size_t>(i)].value() - a) / scale < 1e-7);
            }
        }
    }
}

TEST_CASE("radius ladder and center ladder are consistent") {
    CurveModel c = builtin("random_poly_r4:2");
    const int m = c.m();
    for (double th : sample_grid(c, 15)) {
        Apparatus ap = apparatus_at(c, th);
        if (!ap.has_focal) continue;
        const FocalData& fo = ap.focal;

        double acc = 0.0;
        for (int l = 0; l < m; ++l) {
            acc += fo.focal_curvatures[static_cast<size_t>(l)] * fo.focal_curvatures[static_cast<size_t>(l)];
            CHECK(fo.radii[static_cast<size_t>(l)] == doctest::Approx(std::sqrt(acc)).epsilon(1e-12));
        }

        // gamma_l - gamma_{l-1} = c_l n_l, and gamma_m is the center
        VecD prev = ap.point;
        for (int l = 1; l <= m; ++l) {
            const VecD& cur = fo.partial_centers[static_cast<size_t>(l - 1)];
            for (size_t j = 0; j < cur.size(); ++j) {
                const double step = fo.focal_curvatures[static_cast<size_t>(l - 1)] *
                                    ap.frenet.frame[static_cast<size_t>(l)][j];
                CHECK(cur[j] - prev[j] == doctest::Approx(step).epsilon(1e-9));
            }
            prev = cur;
        }
        CHECK(vec_dist(fo.partial_centers.back(), fo.center) < 1e-10);

        // R_m is the distance from the point to the center
        double d2 = 0.0;
        for (size_t j = 0; j < fo.center.size(); ++j)
            d2 += (fo.center[j] - ap.point[j]) * (fo.center[j] - ap.point[j]);
        CHECK(std::sqrt(d2) == doctest::Approx(fo.radii.back()).epsilon(1e-9));
    }
}

TEST_CASE("the focal curve moves along the last normal") {
    for (const char* name : {"trefoil_like", "random_poly_r4:1"}) {
        CurveModel c = builtin(name);
        const int m = c.m();
        for (double th : sample_grid(c, 20)) {
            Apparatus ap = apparatus_at(c, th);
            if (!ap.has_focal) continue;
            const VecD& nm = ap.frenet.frame[static_cast<size_t>(m)];
            const double rho = ap.focal.vertex_residual;
            double scale = std::max(1.0, std::fabs(rho));
            for (int j = 0; j <= m; ++j) {
                const double dc = ap.focal.center_jets[j].derivative(1);
                INFO(name, " theta=", th, " component ", j);
                CHECK(std::fabs(dc - rho * nm[static_cast<size_t>(j)]) / scale < 1e-8);
            }
        }
    }
}

TEST_CASE("focal planes form a nested flag") {
    CurveModel c = builtin("random_poly_r4:1");
    const int m = c.m();
    Apparatus ap = apparatus_at(c, 0.6);
    REQUIRE(ap.has_focal);
    std::vector<FocalPlane> planes = focal_planes(ap.point, ap.frenet, ap.focal);
    REQUIRE(planes.size() == static_cast<size_t>(m + 1));

    for (int k = 0; k < m + 1; ++k) {
        const FocalPlane& p = planes[static_cast<size_t>(k)];
        CHECK(p.codim == k + 1);
        CHECK(p.directions.size() == static_cast<size_t>(m - k));
        // every direction is orthogonal to the tangent
        for (const VecD& d : p.directions)
            CHECK(std::fabs(dot(d, ap.frenet.frame[0])) < 1e-12);
    }
    // A^{m+1} is the hypersphere center
    CHECK(vec_dist(planes.back().basepoint, ap.focal.center) < 1e-10);

    // nesting: basepoint and directions of A^{k+1} lie in A^k
    for (int k = 0; k + 1 < m + 1; ++k) {
        const FocalPlane& outer = planes[static_cast<size_t>(k)];
        const FocalPlane& inner = planes[static_cast<size_t>(k + 1)];
        VecD diff(outer.basepoint.size());
        for (size_t j = 0; j < diff.size(); ++j) diff[j] = inner.basepoint[j] - outer.basepoint[j];
        // remove the components along outer's directions; nothing may remain
        double residual = dot(diff, diff);
        for (const VecD& d : outer.directions) {
            const double p = dot(diff, d);
            residual -= p * p;
        }
        CHECK(std::fabs(residual) < 1e-10);
        for (const VecD& di : inner.directions) {
            double r2 = 1.0;
            for (const VecD& d : outer.directions) {
                const double p = dot(di, d);
                r2 -= p * p;
            }
            CHECK(std::fabs(r2) < 1e-10);
        }
    }
}

TEST_CASE("flattening points have no focal data") {
    CurveModel flat = parse_curve("dim 3; x = cos(t); y = sin(t); z = 0; domain [0, 2*pi]; periodic;");
    Apparatus ap = apparatus_at(flat, 0.8);
    CHECK_FALSE(ap.has_focal);

    ArcNormalized an = arc_normalize(flat.eval_jet(0.8, 6));
    FrenetData fr = frenet_jets(an.curve, 2, 3);
    CHECK_THROWS_AS(focal_data(an.curve, fr), FlatteningPoint);
    CHECK_THROWS_AS(focal_curvatures_recursive(fr), CurvatureZero);
}

TEST_CASE("focal_curve sweeps the grid with arc length accounting") {
    CurveModel c = builtin("trefoil_like");
    const int n = 64;
    std::vector<FocalSample> sweep = focal_curve(c, n);
    std::vector<double> grid = sample_grid(c, n);
    REQUIRE(sweep.size() == grid.size());
    double prev_s = -1.0;
    for (size_t i = 0; i < sweep.size(); ++i) {
        CHECK(sweep[i].theta == doctest::Approx(grid[i]).epsilon(1e-15));
        CHECK(sweep[i].s > prev_s);
        prev_s = sweep[i].s;
        CHECK_FALSE(sweep[i].flattening);  // trefoil_like has none on this grid
        VecJet v = c.eval_jet(sweep[i].theta, 0);
        for (int j = 0; j < 3; ++j)
            CHECK(sweep[i].point[static_cast<size_t>(j)] == doctest::Approx(v[j].value()).epsilon(1e-14));
    }
    CHECK(sweep[0].s == 0.0);
}

TEST_CASE("default jet order covers the recursion depth") {
    for (int m = 1; m <= 4; ++m) CHECK(default_jet_order(m) >= m + 2);
    CurveModel c = builtin("sphere_curve_r4");
    Apparatus ap = apparatus_at(c, 0.3);
    CHECK(ap.focal.jet_order >= 2);
    CHECK(ap.focal.c_jets.size() == 3);
}
