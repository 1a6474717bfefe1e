#pragma once

#include <string>
#include <vector>

#include "focalis/curve.hpp"
#include "focalis/focal.hpp"

namespace focalis {

enum class EventKind { Vertex, PseudoVertex, Flattening, CriticalRadius };

const char* event_kind_name(EventKind k);

struct Event {
    EventKind kind = EventKind::Vertex;
    int l = 0;  // sphere index, set for CriticalRadius events
    double theta = 0.0;
    double residual = 0.0;  // defining function value at theta
    bool refined = false;
    bool double_root = false;
    VecD c_values;  // focal curvatures at the event (empty at flattenings)
    std::vector<std::string> annotations;
};

// Per defining function: its grid statistics and whether it vanished
// identically (spherical curves, constant-radius degeneracies) instead of at
// isolated points.
struct ChannelStatus {
    std::string name;
    bool identically_zero = false;
    bool no_valid_samples = false;
    double max_abs = 0.0;
    double scale = 1.0;
    int excluded_samples = 0;  // samples skipped near flattenings
};

struct EventReport {
    std::vector<Event> events;  // ordered by theta
    int vertices = 0;
    int pseudo_vertices = 0;
    int flattenings = 0;
    std::vector<ChannelStatus> channels;
    std::vector<std::string> warnings;
};

// Sign-change scan with bisection refinement over a uniform grid.
// Channels: vertex (c_m' + c_{m-1} kappa_m), pseudo-vertex (c_m),
// flattening (kappa_m), critical radius R_l (c_l c_{l+1} for l < m,
// c_m times the vertex residual for l = m).
EventReport scan_events(const CurveModel& curve, int samples);

// Adds the critical-radius implications of each located zero: a c_l zero
// makes both R_{l-1} and R_l critical, a pseudo-vertex makes R_{m-1} and
// R_m critical, a vertex makes R_m critical.
EventReport classify_critical_radii(EventReport report);

}  // namespace focalis
