#include "focalis/events.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>

namespace focalis {

const char* event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::Vertex: return "vertex";
        case EventKind::PseudoVertex: return "pseudo_vertex";
        case EventKind::Flattening: return "flattening";
        case EventKind::CriticalRadius: return "critical_radius";
    }
    return "?";
}

namespace {

constexpr double kRefineWidth = 1e-10;
constexpr double kDedupeWidth = 1e-8;
constexpr double kIdenticallyZero = 1e-9;
constexpr double kPoleGuard = 1e-3;   // of the grid maximum kappa_1
constexpr double kPoleReject = 1e-4;  // refined value vs bracket endpoints
constexpr double kDoubleRoot = 1e-7;  // of the channel scale

struct SampleVals {
    bool focal_ok = false;
    double kappa_1 = 0.0;
    double kappa_m = 0.0;
    double kappa_m_deriv = 0.0;
    VecD c;
    double rho = 0.0;
    double rho_deriv = 0.0;
    double c_m_deriv = 0.0;
    double r_m = 0.0;
    VecD products;
    VecD product_derivs;
};

SampleVals eval_sample(const CurveModel& curve, double theta) {
    const int m = curve.m();
    SampleVals sv;
    Apparatus ap = apparatus_at(curve, theta);
    sv.kappa_1 = ap.frenet.curvatures.front();
    sv.kappa_m = ap.frenet.curvatures.back();
    sv.kappa_m_deriv = ap.frenet.curvature_jets.back().derivative(1);
    if (!ap.has_focal) return sv;
    sv.focal_ok = true;
    const FocalData& fo = ap.focal;
    sv.c = fo.focal_curvatures;
    sv.rho = fo.vertex_residual;
    sv.rho_deriv = fo.residual_jet.derivative(1);
    sv.c_m_deriv = fo.c_jets.back().derivative(1);
    sv.r_m = fo.radii.back();
    sv.products.resize(static_cast<size_t>(m));
    sv.product_derivs.resize(static_cast<size_t>(m));
    for (int l = 1; l < m; ++l) {
        const Jet p = fo.c_jets[static_cast<size_t>(l - 1)] * fo.c_jets[static_cast<size_t>(l)];
        sv.products[static_cast<size_t>(l - 1)] = p.value();
        sv.product_derivs[static_cast<size_t>(l - 1)] = p.derivative(1);
    }
    const Jet pm = fo.c_jets[static_cast<size_t>(m - 1)] * fo.residual_jet;
    sv.products[static_cast<size_t>(m - 1)] = pm.value();
    sv.product_derivs[static_cast<size_t>(m - 1)] = pm.derivative(1);
    return sv;
}

struct Channel {
    std::string name;
    EventKind kind = EventKind::Vertex;
    int l = 0;
    bool needs_focal = true;
    std::function<double(const SampleVals&)> value;
    std::function<double(const SampleVals&)> deriv;
    ChannelStatus status;
};

std::vector<Channel> make_channels(int m) {
    std::vector<Channel> ch;
    {
        Channel c;
        c.name = "flattening";
        c.kind = EventKind::Flattening;
        c.needs_focal = false;
        c.value = [](const SampleVals& s) { return s.kappa_m; };
        c.deriv = [](const SampleVals& s) { return s.kappa_m_deriv; };
        ch.push_back(std::move(c));
    }
    {
        Channel c;
        c.name = "vertex";
        c.kind = EventKind::Vertex;
        c.value = [](const SampleVals& s) { return s.rho; };
        c.deriv = [](const SampleVals& s) { return s.rho_deriv; };
        ch.push_back(std::move(c));
    }
    {
        Channel c;
        c.name = "pseudo_vertex";
        c.kind = EventKind::PseudoVertex;
        c.value = [](const SampleVals& s) { return s.c.back(); };
        c.deriv = [](const SampleVals& s) { return s.c_m_deriv; };
        ch.push_back(std::move(c));
    }
    for (int l = 1; l <= m; ++l) {
        Channel c;
        c.name = "critical_radius_" + std::to_string(l);
        c.kind = EventKind::CriticalRadius;
        c.l = l;
        c.value = [l](const SampleVals& s) { return s.products[static_cast<size_t>(l - 1)]; };
        c.deriv = [l](const SampleVals& s) { return s.product_derivs[static_cast<size_t>(l - 1)]; };
        ch.push_back(std::move(c));
    }
    return ch;
}

class Scanner {
public:
    Scanner(const CurveModel& curve, int samples)
        : curve_(curve), grid_(sample_grid(curve, samples)) {
        vals_.reserve(grid_.size());
        double k1max = 0.0;
        for (double th : grid_) {
            vals_.push_back(eval_sample(curve_, th));
            k1max = std::max(k1max, vals_.back().kappa_1);
        }
        pole_tol_ = kPoleGuard * k1max;
        step_ = grid_.size() > 1 ? grid_[1] - grid_[0] : 0.0;
    }

    const std::vector<double>& grid() const { return grid_; }
    double step() const { return step_; }

    bool usable(const SampleVals& sv, const Channel& ch) const {
        if (!ch.needs_focal) return true;
        return sv.focal_ok && std::fabs(sv.kappa_m) >= pole_tol_;
    }

    // channel value at an arbitrary parameter; nullopt inside guarded zones
    std::optional<double> value_at(double theta, const Channel& ch, bool deriv) const {
        const SampleVals sv = eval_sample(curve_, theta);
        if (!usable(sv, ch)) return std::nullopt;
        return deriv ? ch.deriv(sv) : ch.value(sv);
    }

    void channel_stats(Channel& ch) const {
        const int m = curve_.m();
        double max_abs = 0.0, max_deriv = 0.0;
        double scale_a = 0.0, scale_b = 0.0;
        int kept = 0;
        for (const SampleVals& sv : vals_) {
            if (!usable(sv, ch)) continue;
            ++kept;
            max_abs = std::max(max_abs, std::fabs(ch.value(sv)));
            max_deriv = std::max(max_deriv, std::fabs(ch.deriv(sv)));
            switch (ch.kind) {
                case EventKind::Vertex:
                    scale_a = std::max(scale_a, std::fabs(sv.c_m_deriv));
                    scale_b = std::max(scale_b, std::fabs((m >= 2 ? sv.c[static_cast<size_t>(m - 2)] : 0.0) * sv.kappa_m));
                    break;
                case EventKind::PseudoVertex:
                    scale_a = std::max(scale_a, sv.r_m);
                    break;
                case EventKind::Flattening:
                    scale_a = std::max(scale_a, sv.kappa_1);
                    break;
                case EventKind::CriticalRadius:
                    break;
            }
        }
        ch.status.name = ch.name;
        ch.status.excluded_samples = static_cast<int>(vals_.size()) - kept;
        ch.status.max_abs = max_abs;
        if (kept == 0) {
            ch.status.no_valid_samples = true;
            return;
        }
        switch (ch.kind) {
            case EventKind::Vertex: ch.status.scale = std::max({1.0, scale_a, scale_b}); break;
            case EventKind::PseudoVertex: ch.status.scale = std::max(1.0, scale_a); break;
            case EventKind::Flattening: ch.status.scale = std::max(scale_a, 1e-300); break;
            case EventKind::CriticalRadius: ch.status.scale = std::max(1.0, max_abs); break;
        }
        ch.status.identically_zero = max_abs < kIdenticallyZero * ch.status.scale;
        max_deriv_ = max_deriv;  // stashed for the caller's double-root decision
    }

    double last_max_deriv() const { return max_deriv_; }
    const SampleVals& sample(size_t i) const { return vals_[i]; }
    bool periodic() const { return curve_.periodic; }
    double period() const { return curve_.period(); }
    const CurveModel& curve() const { return curve_; }

private:
    const CurveModel& curve_;
    std::vector<double> grid_;
    std::vector<SampleVals> vals_;
    double pole_tol_ = 0.0;
    double step_ = 0.0;
    mutable double max_deriv_ = 0.0;
};

std::optional<double> bisect(const Scanner& sc, const Channel& ch, bool deriv, double a, double b,
                             double fa) {
    // invariant: sign(fa) != sign(f(b))
    for (int it = 0; it < 200 && (b - a) > kRefineWidth; ++it) {
        const double mid = 0.5 * (a + b);
        const std::optional<double> fm = sc.value_at(mid, ch, deriv);
        if (!fm) return std::nullopt;  // wandered into a guarded zone: a pole, not a zero
        if (*fm == 0.0) return mid;
        if ((*fm > 0.0) == (fa > 0.0)) {
            a = mid;
            fa = *fm;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

Event make_event(const Scanner& sc, const Channel& ch, double theta, double residual,
                 bool refined, bool double_root) {
    Event ev;
    ev.kind = ch.kind;
    ev.l = ch.l;
    ev.theta = theta;
    ev.residual = residual;
    ev.refined = refined;
    ev.double_root = double_root;
    const SampleVals sv = eval_sample(sc.curve(), theta);
    if (sv.focal_ok) ev.c_values = sv.c;
    return ev;
}

void scan_channel(const Scanner& sc, const Channel& ch, std::vector<Event>& out) {
    const std::vector<double>& grid = sc.grid();
    const size_t n = grid.size();
    const size_t pairs = sc.periodic() ? n : n - 1;

    struct Node {
        double theta;
        bool ok;
        double f, df;
    };
    std::vector<Node> nodes(n);
    for (size_t i = 0; i < n; ++i) {
        const SampleVals& sv = sc.sample(i);
        nodes[i].theta = grid[i];
        nodes[i].ok = sc.usable(sv, ch);
        if (nodes[i].ok) {
            nodes[i].f = ch.value(sv);
            nodes[i].df = ch.deriv(sv);
        }
    }

    // grid samples landing exactly on a zero
    for (const Node& nd : nodes)
        if (nd.ok && nd.f == 0.0) out.push_back(make_event(sc, ch, nd.theta, 0.0, true, false));

    auto refine_bracket = [&](double a, double b, double fa, double fb, bool deriv) {
        const std::optional<double> root = bisect(sc, ch, deriv, a, b, fa);
        if (!root) return;
        const std::optional<double> fr = sc.value_at(*root, ch, false);
        if (!fr) return;
        if (!deriv) {
            // reject poles masquerading as sign changes: a genuine zero has a
            // tiny value after refinement, a pole keeps growing
            if (std::fabs(*fr) > kPoleReject * std::max(std::fabs(fa), std::fabs(fb))) return;
        } else {
            if (std::fabs(*fr) > kDoubleRoot * ch.status.scale) return;
        }
        double theta = *root;
        if (sc.periodic()) {
            const double hi = sc.curve().domain_lo + sc.period();
            if (theta >= hi) theta -= sc.period();
        }
        out.push_back(make_event(sc, ch, theta, *fr, true, deriv));
    };

    const bool search_doubles = sc.last_max_deriv() >= kIdenticallyZero * ch.status.scale;
    for (size_t i = 0; i < pairs; ++i) {
        const Node& a = nodes[i];
        const Node& b = nodes[(i + 1) % n];
        if (!a.ok || !b.ok) continue;
        double tb = (i + 1 == n) ? b.theta + sc.period() : b.theta;
        if (a.f * b.f < 0.0) refine_bracket(a.theta, tb, a.f, b.f, false);
        if (search_doubles && a.df * b.df < 0.0) refine_bracket(a.theta, tb, a.df, b.df, true);
    }
}

double wrap_distance(double a, double b, bool periodic, double period) {
    double d = std::fabs(a - b);
    if (periodic) d = std::min(d, std::fabs(period - d));
    return d;
}

}  // namespace

EventReport scan_events(const CurveModel& curve, int samples) {
    if (samples < 64) throw DomainError("event scan needs at least 64 samples");
    const int m = curve.m();

    Scanner sc(curve, samples);
    std::vector<Channel> channels = make_channels(m);

    EventReport rep;
    for (Channel& ch : channels) {
        sc.channel_stats(ch);
        std::vector<Event> found;
        if (!ch.status.identically_zero && !ch.status.no_valid_samples) scan_channel(sc, ch, found);

        // deduplicate per channel (coincident roots, wrapped duplicates)
        std::sort(found.begin(), found.end(), [](const Event& x, const Event& y) { return x.theta < y.theta; });
        std::vector<Event> kept;
        for (Event& ev : found) {
            bool dup = false;
            for (const Event& k : kept)
                if (wrap_distance(ev.theta, k.theta, curve.periodic, curve.period()) < kDedupeWidth) dup = true;
            if (!dup) kept.push_back(std::move(ev));
        }
        for (size_t i = 1; i < kept.size(); ++i) {
            if (kept[i].theta - kept[i - 1].theta < 2.0 * sc.step()) {
                rep.warnings.push_back("grid too coarse: " + ch.name + " events at theta=" +
                                       std::to_string(kept[i - 1].theta) + " and theta=" +
                                       std::to_string(kept[i].theta) + " are less than two cells apart");
            }
        }
        for (Event& ev : kept) rep.events.push_back(std::move(ev));
        rep.channels.push_back(ch.status);
    }

    std::sort(rep.events.begin(), rep.events.end(),
              [](const Event& x, const Event& y) { return x.theta < y.theta; });
    for (const Event& ev : rep.events) {
        if (ev.kind == EventKind::Vertex) ++rep.vertices;
        if (ev.kind == EventKind::PseudoVertex) ++rep.pseudo_vertices;
        if (ev.kind == EventKind::Flattening) ++rep.flattenings;
    }
    return rep;
}

EventReport classify_critical_radii(EventReport report) {
    // recover m from any event's focal curvatures
    int m = 0;
    for (const Event& ev : report.events) m = std::max(m, static_cast<int>(ev.c_values.size()));

    for (Event& ev : report.events) {
        switch (ev.kind) {
            case EventKind::Vertex:
                if (m > 0) ev.annotations.push_back("R_" + std::to_string(m) + " critical");
                break;
            case EventKind::PseudoVertex:
                if (m >= 2)
                    ev.annotations.push_back("R_" + std::to_string(m - 1) + " and R_" + std::to_string(m) + " critical");
                else if (m == 1)
                    ev.annotations.push_back("R_1 critical");
                break;
            case EventKind::CriticalRadius: {
                if (ev.c_values.empty()) break;
                const int l = ev.l;
                if (l >= m) break;  // the hypersphere channel duplicates vertex/pseudo-vertex info
                const double cl = std::fabs(ev.c_values[static_cast<size_t>(l - 1)]);
                const double cn = std::fabs(ev.c_values[static_cast<size_t>(l)]);
                const int z = (cl < cn && l >= 2) ? l : l + 1;  // which factor vanished (c_1 never does)
                ev.annotations.push_back("c_" + std::to_string(z) + " = 0 here");
                if (z >= 2)
                    ev.annotations.push_back("R_" + std::to_string(z - 1) + " and R_" + std::to_string(z) + " critical");
                break;
            }
            case EventKind::Flattening:
                ev.annotations.push_back("osculating hypersphere center at infinity");
                break;
        }
    }
    return report;
}

}  // namespace focalis
