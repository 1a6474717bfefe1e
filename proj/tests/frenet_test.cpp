#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "focalis/curve.hpp"
#include "focalis/frenet.hpp"
#include "focalis/linalg.hpp"

using namespace focalis;

namespace {

FrenetData frame_of(const CurveModel& c, double theta, int extra = 2) {
    const int m = c.m();
    ArcNormalized an = arc_normalize(c.eval_jet(theta, m + 1 + extra));
    return frenet_jets(an.curve, m, extra);
}

double frame_distance(const VecD& a, const VecD& b, double sign) {
    double worst = 0.0;
    for (size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::fabs(a[j] - sign * b[j]));
    return worst;
}

}  // namespace

TEST_CASE("helix frame and curvatures at the start point") {
    CHECK(arc_normalize(builtin("helix").eval_jet(0.0, 3)).speed ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    FrenetData fr = frame_of(builtin("helix"), 0.0);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(fr.curvatures[0] == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(fr.curvatures[1] == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(frame_distance(fr.frame[0], {0.0, r, r}, 1.0) < 1e-13);
    CHECK(frame_distance(fr.frame[1], {-1.0, 0.0, 0.0}, 1.0) < 1e-13);
    CHECK(frame_distance(fr.frame[2], {0.0, -r, r}, 1.0) < 1e-13);
}

TEST_CASE("twisted cubic at the origin") {
    FrenetData fr = frame_of(builtin("twisted_cubic"), 0.0);
    CHECK(fr.curvatures[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fr.curvatures[1] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(frame_distance(fr.frame[0], {1.0, 0.0, 0.0}, 1.0) < 1e-13);
    CHECK(frame_distance(fr.frame[1], {0.0, 1.0, 0.0}, 1.0) < 1e-13);
    CHECK(frame_distance(fr.frame[2], {0.0, 0.0, 1.0}, 1.0) < 1e-13);
}

TEST_CASE("ellipse curvature at the flat and tight points") {
    // for (2 cos t, sin t): kappa = 2 / (4 sin^2 + cos^2)^(3/2)
    CurveModel c = builtin("ellipse_2_1");
    CHECK(frame_of(c, 0.0).curvatures[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(frame_of(c, M_PI / 2.0).curvatures[0] == doctest::Approx(0.25).epsilon(1e-12));
    const double t = 1.1;
    const double expected = 2.0 / std::pow(4.0 * std::sin(t) * std::sin(t) + std::cos(t) * std::cos(t), 1.5);
    CHECK(frame_of(c, t).curvatures[0] == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("frames are orthonormal with determinant +1") {
    for (const std::string& name : builtin_names()) {
        CurveModel c = builtin(name);
        for (double th : sample_grid(c, 50)) {
            FrenetData fr = frame_of(c, th, 1);
            const size_t n = fr.frame.size();
            for (size_t i = 0; i < n; ++i)
                for (size_t j = i; j < n; ++j) {
                    INFO(name, " theta=", th, " rows ", i, ",", j);
                    CHECK(std::fabs(dot(fr.frame[i], fr.frame[j]) - (i == j ? 1.0 : 0.0)) < 1e-10);
                }
            CHECK(det_laplace(fr.frame) == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("frame jets satisfy the Frenet equations") {
    for (const char* name : {"ellipse_2_1", "trefoil_like", "random_poly_r4:1"}) {
        CurveModel c = builtin(name);
        const int m = c.m();
        for (double th : sample_grid(c, 25)) {
            FrenetData fr = frame_of(c, th);
            for (int i = 0; i <= m; ++i) {
                for (int j = 0; j <= m; ++j) {
                    double rhs = 0.0;
                    if (i > 0) rhs -= fr.curvatures[static_cast<size_t>(i - 1)] * fr.frame[static_cast<size_t>(i - 1)][static_cast<size_t>(j)];
                    if (i < m) rhs += fr.curvatures[static_cast<size_t>(i)] * fr.frame[static_cast<size_t>(i + 1)][static_cast<size_t>(j)];
                    const double lhs = fr.frame_jets[static_cast<size_t>(i)][j].derivative(1);
                    INFO(name, " theta=", th, " row ", i, " component ", j);
                    CHECK(std::fabs(lhs - rhs) < 1e-7);
                }
            }
        }
    }
}

TEST_CASE("frenet_jets agrees with frenet_at") {
    CurveModel c = builtin("trefoil_like");
    const int m = c.m();
    for (double th : {0.3, 1.7, 4.4}) {
        ArcNormalized an = arc_normalize(c.eval_jet(th, m + 4));
        FrenetData a = frenet_at(an.curve, m);
        FrenetData b = frenet_jets(an.curve, m, 3);
        for (int i = 0; i <= m; ++i) {
            CHECK(frame_distance(a.frame[static_cast<size_t>(i)], b.frame[static_cast<size_t>(i)], 1.0) < 1e-13);
            if (i < m) {
                CHECK(a.curvatures[static_cast<size_t>(i)] ==
                      doctest::Approx(b.curvatures[static_cast<size_t>(i)]).epsilon(1e-13));
                CHECK(b.curvature_jets[static_cast<size_t>(i)].value() ==
                      doctest::Approx(b.curvatures[static_cast<size_t>(i)]).epsilon(1e-14));
            }
        }
    }
}

TEST_CASE("curvatures are parametrization invariant") {
    // same helix traversed as t = u^2/4 over u in [1, 2]
    CurveModel slow = parse_curve(
        "dim 3; x = cos(t^2/4); y = sin(t^2/4); z = t^2/4; domain [1, 2];");
    CurveModel fast = builtin("helix");
    const double u0 = 1.4, th0 = u0 * u0 / 4.0;
    FrenetData a = frame_of(slow, u0);
    FrenetData b = frame_of(fast, th0);
    for (int i = 0; i < 2; ++i)
        CHECK(a.curvatures[static_cast<size_t>(i)] ==
              doctest::Approx(b.curvatures[static_cast<size_t>(i)]).epsilon(1e-9));
    for (int i = 0; i <= 2; ++i)
        CHECK(frame_distance(a.frame[static_cast<size_t>(i)], b.frame[static_cast<size_t>(i)], 1.0) < 1e-9);
}

TEST_CASE("orientation reversal flips t and the last normal, keeps curvatures") {
    CurveModel fwd = builtin("twisted_cubic");
    CurveModel rev = parse_curve("dim 3; x = -t; y = t^2; z = -t^3; domain [-1, 1];");
    const double th = 0.3;
    FrenetData a = frame_of(fwd, th);
    FrenetData b = frame_of(rev, -th);
    CHECK(b.curvatures[0] == doctest::Approx(a.curvatures[0]).epsilon(1e-12));
    CHECK(b.curvatures[1] == doctest::Approx(a.curvatures[1]).epsilon(1e-12));
    CHECK(frame_distance(b.frame[0], a.frame[0], -1.0) < 1e-12);
    CHECK(frame_distance(b.frame[1], a.frame[1], 1.0) < 1e-12);
    CHECK(frame_distance(b.frame[2], a.frame[2], -1.0) < 1e-12);
}

TEST_CASE("scaling the curve divides the curvatures") {
    CurveModel big = parse_curve("dim 3; x = 3*cos(t); y = 3*sin(t); z = 3*t; domain [0, 2*pi];");
    FrenetData a = frame_of(builtin("helix"), 0.8);
    FrenetData b = frame_of(big, 0.8);
    CHECK(b.curvatures[0] == doctest::Approx(a.curvatures[0] / 3.0).epsilon(1e-12));
    CHECK(b.curvatures[1] == doctest::Approx(a.curvatures[1] / 3.0).epsilon(1e-12));
}

TEST_CASE("arc length normalization") {
    CurveModel c = builtin("trefoil_like");
    const double th = 0.7;
    VecJet raw = c.eval_jet(th, 8);
    ArcNormalized an = arc_normalize(raw);
    CHECK(an.s_of_theta.value() == 0.0);
    CHECK(an.s_of_theta[1] == doctest::Approx(an.speed).epsilon(1e-14));

    // unit speed: <gamma', gamma'> is the constant jet 1
    Jet speed2 = Jet::constant(0.0, an.curve.order() - 1);
    for (int j = 0; j < an.curve.dim(); ++j) {
        Jet d = derive(an.curve[j]);
        speed2 += d * d;
    }
    CHECK(speed2.value() == doctest::Approx(1.0).epsilon(1e-13));
    for (int k = 1; k <= speed2.order(); ++k) CHECK(std::fabs(speed2[k]) < 1e-12);

    // composing back with s(theta) recovers the raw jets
    for (int j = 0; j < an.curve.dim(); ++j) {
        Jet back = compose(an.curve[j], an.s_of_theta);
        for (int k = 0; k <= back.order(); ++k)
            CHECK(std::fabs(back[k] - raw[j][k]) < 1e-11);
    }
}

TEST_CASE("straight line has speed but no frame") {
    CurveModel line = parse_curve("dim 3; x = 2*t; y = 0; z = 0; domain [0, 1];");
    ArcNormalized an = arc_normalize(line.eval_jet(0.5, 4));
    CHECK(an.speed == doctest::Approx(2.0).epsilon(1e-15));
    CHECK_FALSE(is_good(line.eval_jet(0.5, 3), 2).is_good);
    CHECK_THROWS_AS(frenet_at(an.curve, 2), NotGoodCurve);
}

TEST_CASE("planar circle in R^3 is good but flattening") {
    CurveModel c = parse_curve("dim 3; x = cos(t); y = sin(t); z = 0; domain [0, 2*pi]; periodic;");
    GoodnessReport rep = is_good(c.eval_jet(1.0, 3), 2);
    CHECK(rep.is_good);
    CHECK(rep.is_flattening);
    FrenetData fr = frame_of(c, 1.0);
    CHECK(fr.curvatures[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::fabs(fr.curvatures[1]) < 1e-12);
}

TEST_CASE("insufficient jet order is rejected") {
    CurveModel c = builtin("trefoil_like");
    ArcNormalized an = arc_normalize(c.eval_jet(0.5, 3));
    CHECK_THROWS_AS(frenet_jets(an.curve, 2, 2), InsufficientOrder);  // needs order >= 5
    CHECK_THROWS_AS(arc_normalize(VecJet{}), SingularParametrization);
}
