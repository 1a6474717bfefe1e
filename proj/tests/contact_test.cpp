#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "focalis/contact.hpp"
#include "focalis/curve.hpp"
#include "focalis/focal.hpp"
#include "focalis/frenet.hpp"

using namespace focalis;

TEST_CASE("cubic graph against lines through the origin") {
    CurveModel c = parse_curve("dim 2; x = t; y = t^3; domain [-1, 1];");
    VecJet v = c.eval_jet(0.0, 6);

    ContactQuery x_axis = ContactQuery::affine({0.0, 0.0}, {{1.0, 0.0}});
    ContactResult r = contact_order(v, x_axis, 6);
    CHECK(r.order == 3);
    CHECK_FALSE(r.at_least);

    ContactQuery diagonal = ContactQuery::affine({0.0, 0.0}, {{M_SQRT1_2, M_SQRT1_2}});
    CHECK(contact_order(v, diagonal, 6).order == 1);

    // through a different point entirely
    ContactQuery off = ContactQuery::affine({0.0, 1.0}, {{1.0, 0.0}});
    CHECK(contact_order(v, off, 6).order == 0);
}

TEST_CASE("tangent line of a parabola has second order contact") {
    CurveModel c = parse_curve("dim 2; x = t; y = t^2; domain [-1, 1];");
    VecJet v = c.eval_jet(0.0, 6);
    CHECK(contact_order(v, ContactQuery::affine({0.0, 0.0}, {{1.0, 0.0}}), 6).order == 2);
}

TEST_CASE("point queries") {
    CurveModel c = builtin("helix");
    VecJet v = c.eval_jet(1.2, 4);
    VecD on = {std::cos(1.2), std::sin(1.2), 1.2};
    CHECK(contact_order(v, ContactQuery::affine(on, {}), 4).order == 1);
    CHECK(contact_order(v, ContactQuery::affine({0.0, 0.0, 0.0}, {}), 4).order == 0);
}

TEST_CASE("osculating circle of the ellipse") {
    CurveModel c = builtin("ellipse_2_1");

    // generic points: third order exactly
    for (double th : {0.3, 0.8, 2.2, 4.0, 5.5}) {
        Apparatus ap = apparatus_at(c, th);
        ContactQuery q = ContactQuery::sphere(ap.focal.center, ap.focal.radii[0]);
        ContactResult r = contact_order(c.eval_jet(th, 8), q, 8);
        INFO("theta=", th);
        CHECK(r.order == 3);
    }

    // the four vertices: at least fourth order
    for (double th : {0.0, M_PI / 2.0, M_PI, 3.0 * M_PI / 2.0}) {
        Apparatus ap = apparatus_at(c, th);
        ContactQuery q = ContactQuery::sphere(ap.focal.center, ap.focal.radii[0]);
        ContactResult r = contact_order(c.eval_jet(th, 8), q, 8);
        INFO("theta=", th);
        CHECK(r.order >= 4);
    }
}

TEST_CASE("osculating spheres of the helix") {
    CurveModel c = builtin("helix");
    const double th = 0.9;
    Apparatus ap = apparatus_at(c, th);
    VecJet v = c.eval_jet(th, 10);

    // osculating circle (l = 1): generic third order contact
    CHECK(osculating_sphere_contact(v, ap.frenet, ap.focal, 1, 10).order == 3);
    // osculating sphere (l = 2): the helix has no vertices, so exactly 4
    ContactResult r2 = osculating_sphere_contact(v, ap.frenet, ap.focal, 2, 10);
    CHECK(r2.order == 4);
    CHECK_FALSE(r2.at_least);

    CHECK_THROWS_AS(osculating_sphere_contact(v, ap.frenet, ap.focal, 0, 10), DomainError);
    CHECK_THROWS_AS(osculating_sphere_contact(v, ap.frenet, ap.focal, 3, 10), DomainError);
}

TEST_CASE("spherical curve meets its osculating sphere to every order") {
    CurveModel c = builtin("sphere_curve_r3");
    for (double th : {0.5, 1.1, 2.9}) {
        Apparatus ap = apparatus_at(c, th);
        if (!ap.has_focal) continue;
        ContactResult r = osculating_sphere_contact(c.eval_jet(th, 12), ap.frenet, ap.focal, 2, 12);
        INFO("theta=", th);
        CHECK(r.at_least);
        CHECK(r.order == 12);
    }
}

TEST_CASE("osculating planes have contact matching their dimension") {
    CurveModel c = builtin("random_poly_r4:1");
    const int m = c.m();
    const double th = 0.25;
    Apparatus ap = apparatus_at(c, th);
    VecJet v = c.eval_jet(th, 10);
    for (int k = 1; k <= m; ++k) {
        MatD dirs(ap.frenet.frame.begin(), ap.frenet.frame.begin() + k);
        ContactResult r = contact_order(v, ContactQuery::affine(ap.point, dirs), 10);
        INFO("k=", k);
        CHECK(r.order >= k + 1);
        CHECK(r.order <= 2 * k + 2);  // and it is finite for a generic curve
    }
}

TEST_CASE("contact order is invariant under rescaling") {
    CurveModel small = builtin("ellipse_2_1");
    CurveModel big = parse_curve("dim 2; x = 20*cos(t); y = 10*sin(t); domain [0, 2*pi]; periodic;");
    for (double th : {0.0, 0.7}) {
        Apparatus a = apparatus_at(small, th);
        Apparatus b = apparatus_at(big, th);
        ContactResult ra = contact_order(small.eval_jet(th, 8),
                                         ContactQuery::sphere(a.focal.center, a.focal.radii[0]), 8);
        ContactResult rb = contact_order(big.eval_jet(th, 8),
                                         ContactQuery::sphere(b.focal.center, b.focal.radii[0]), 8);
        CHECK(ra.order == rb.order);
    }
}

TEST_CASE("bad queries are rejected") {
    CurveModel c = builtin("helix");
    VecJet v = c.eval_jet(0.0, 4);
    CHECK_THROWS_AS(contact_order(v, ContactQuery::sphere({0.0, 0.0}, 1.0), 4), DimensionError);
    CHECK_THROWS_AS(contact_order(v, ContactQuery::sphere({0.0, 0.0, 0.0}, 1.0), 6), InsufficientOrder);
}
