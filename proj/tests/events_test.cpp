#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "focalis/curve.hpp"
#include "focalis/events.hpp"
#include "focalis/focal.hpp"

using namespace focalis;

namespace {

const ChannelStatus& channel(const EventReport& r, const std::string& name) {
    for (const ChannelStatus& ch : r.channels)
        if (ch.name == name) return ch;
    REQUIRE(false);
    static ChannelStatus dummy;
    return dummy;
}

bool has_annotation(const Event& e, const std::string& text) {
    return std::find(e.annotations.begin(), e.annotations.end(), text) != e.annotations.end();
}

}  // namespace

TEST_CASE("ellipse has exactly four vertices at the axis crossings") {
    EventReport r = classify_critical_radii(scan_events(builtin("ellipse_2_1"), 256));
    CHECK(r.vertices == 4);
    CHECK(r.pseudo_vertices == 0);
    CHECK(r.flattenings == 0);

    std::vector<double> expected = {0.0, M_PI / 2.0, M_PI, 3.0 * M_PI / 2.0};
    std::vector<double> found;
    for (const Event& e : r.events) {
        if (e.kind != EventKind::Vertex) continue;
        CHECK(e.refined);
        CHECK(std::fabs(e.residual) < 1e-8);
        CHECK(has_annotation(e, "R_1 critical"));
        found.push_back(e.theta);
    }
    REQUIRE(found.size() == 4);
    std::sort(found.begin(), found.end());
    for (size_t i = 0; i < 4; ++i) CHECK(std::fabs(found[i] - expected[i]) < 1e-6);
}

TEST_CASE("helix emits no events and reports degenerate channels") {
    EventReport r = scan_events(builtin("helix"), 256);
    CHECK(r.events.empty());
    CHECK(r.vertices == 0);
    CHECK(r.pseudo_vertices == 0);
    CHECK(r.flattenings == 0);
    // c_2 and both radii are constant along the helix
    CHECK(channel(r, "pseudo_vertex").identically_zero);
    CHECK(channel(r, "critical_radius_1").identically_zero);
    CHECK(channel(r, "critical_radius_2").identically_zero);
    CHECK_FALSE(channel(r, "vertex").identically_zero);
}

TEST_CASE("spherical curve in R^3") {
    EventReport r = scan_events(builtin("sphere_curve_r3"), 256);
    // every point is a vertex: the channel vanishes identically instead of
    // producing isolated events
    CHECK(channel(r, "vertex").identically_zero);
    CHECK(r.vertices == 0);
    CHECK(r.pseudo_vertices == 4);
    CHECK(r.flattenings == 4);
    // samples next to the flattenings are excluded from the focal channels
    CHECK(channel(r, "pseudo_vertex").excluded_samples > 0);
}

TEST_CASE("twisted cubic has one pseudo-vertex at the inflection of c_2") {
    EventReport r = scan_events(builtin("twisted_cubic"), 256);
    CHECK(r.vertices == 0);
    CHECK(r.pseudo_vertices == 1);
    CHECK(r.flattenings == 0);
    const Event* pv = nullptr;
    for (const Event& e : r.events)
        if (e.kind == EventKind::PseudoVertex) pv = &e;
    REQUIRE(pv != nullptr);
    CHECK(std::fabs(pv->theta) < 1e-6);
    REQUIRE(pv->c_values.size() == 2);
    CHECK(std::fabs(pv->c_values[1]) < 1e-8);
}

TEST_CASE("trefoil event census and closed-curve inequalities") {
    EventReport r = scan_events(builtin("trefoil_like"), 512);
    CHECK(r.vertices == 6);
    CHECK(r.pseudo_vertices == 12);
    CHECK(r.flattenings == 6);
    CHECK(r.vertices + r.pseudo_vertices >= 2);
    CHECK(r.vertices + r.pseudo_vertices >= r.flattenings);

    // events arrive sorted, and no two events of one kind collapse together
    for (size_t i = 1; i < r.events.size(); ++i) {
        CHECK(r.events[i].theta >= r.events[i - 1].theta - 1e-12);
        if (r.events[i].kind == r.events[i - 1].kind && r.events[i].l == r.events[i - 1].l)
            CHECK(r.events[i].theta - r.events[i - 1].theta > 1e-6);
    }
}

TEST_CASE("pseudo-vertices pinch the center ladder") {
    // at c_m = 0 the last two partial centers coincide
    EventReport r = scan_events(builtin("trefoil_like"), 512);
    CurveModel c = builtin("trefoil_like");
    int checked = 0;
    for (const Event& e : r.events) {
        if (e.kind != EventKind::PseudoVertex) continue;
        Apparatus ap = apparatus_at(c, e.theta);
        if (!ap.has_focal) continue;
        const VecD& a = ap.focal.partial_centers[0];
        const VecD& b = ap.focal.partial_centers[1];
        double d = 0.0;
        for (size_t j = 0; j < a.size(); ++j) d = std::max(d, std::fabs(a[j] - b[j]));
        CHECK(d < 1e-7);
        ++checked;
    }
    CHECK(checked == 12);
}

TEST_CASE("classification annotates the radius consequences") {
    EventReport r = classify_critical_radii(scan_events(builtin("trefoil_like"), 512));
    for (const Event& e : r.events) {
        if (e.kind == EventKind::Vertex) CHECK(has_annotation(e, "R_2 critical"));
        if (e.kind == EventKind::PseudoVertex) CHECK(has_annotation(e, "R_1 and R_2 critical"));
    }
}

TEST_CASE("refined vertex events satisfy their defining equation") {
    EventReport r = scan_events(builtin("trefoil_like"), 512);
    CurveModel c = builtin("trefoil_like");
    for (const Event& e : r.events) {
        if (e.kind != EventKind::Vertex || !e.refined) continue;
        Apparatus ap = apparatus_at(c, e.theta);
        REQUIRE(ap.has_focal);
        CHECK(std::fabs(ap.focal.vertex_residual) < 1e-7);
    }
}

TEST_CASE("scan rejects grids too coarse to bracket") {
    CHECK_THROWS_AS(scan_events(builtin("helix"), 32), DomainError);
}
