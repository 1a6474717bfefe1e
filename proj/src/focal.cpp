#include "focalis/focal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace focalis {

namespace {

// Curvature scale for the flattening test. kappa_1 for m >= 2; for plane
// curves (where kappa_1 is itself the signed quantity that vanishes) fall
// back to sqrt(|gamma'''|), which has the same units.
double curvature_scale(const VecJet& v_arc, const FrenetData& fr) {
    if (fr.m() >= 2) return fr.curvatures.front();
    double sq = 0.0;
    for (const Jet& c : v_arc.comp) {
        const double d3 = c.derivative(3);
        sq += d3 * d3;
    }
    return std::sqrt(std::sqrt(sq));
}

void reject_flattening(const VecJet& v_arc, const FrenetData& fr) {
    const double scale = curvature_scale(v_arc, fr);
    if (std::fabs(fr.curvatures.back()) < kFlatteningTol * scale) throw FlatteningPoint();
}

// Derivative ladder of the system defining the center: row k is gamma^(k),
// right side g^(k) with g = |gamma|^2 / 2, k = 1..m+1.
void center_system(const VecJet& v_arc, int m, int truncate_to,
                   std::vector<std::vector<Jet>>& A, std::vector<Jet>& b) {
    const int dim = v_arc.dim();
    Jet g = v_arc[0] * v_arc[0];
    for (int j = 1; j < dim; ++j) g += v_arc[j] * v_arc[j];
    g = g * 0.5;

    std::vector<Jet> row(v_arc.comp.begin(), v_arc.comp.end());
    Jet rhs = g;
    for (int k = 1; k <= m + 1; ++k) {
        for (Jet& c : row) c = derive(c);
        rhs = derive(rhs);
        std::vector<Jet> tr;
        tr.reserve(static_cast<size_t>(dim));
        for (const Jet& c : row) tr.push_back(c.truncated(truncate_to));
        A.push_back(std::move(tr));
        b.push_back(rhs.truncated(truncate_to));
    }
}

}  // namespace

VecD focal_center(const VecJet& v_arc, const FrenetData& fr) {
    const int m = fr.m();
    if (v_arc.dim() != m + 1) throw DimensionError("focal center expects a curve in R^{m+1}");
    if (v_arc.order() < m + 1)
        throw InsufficientOrder("focal center needs arc jets of order m+1");
    reject_flattening(v_arc, fr);

    std::vector<std::vector<Jet>> Aj;
    std::vector<Jet> bj;
    center_system(v_arc, m, 0, Aj, bj);
    MatD A(static_cast<size_t>(m + 1), VecD(static_cast<size_t>(m + 1)));
    VecD b(static_cast<size_t>(m + 1));
    for (int k = 0; k <= m; ++k) {
        for (int j = 0; j <= m; ++j) A[static_cast<size_t>(k)][static_cast<size_t>(j)] = Aj[static_cast<size_t>(k)][static_cast<size_t>(j)].value();
        b[static_cast<size_t>(k)] = bj[static_cast<size_t>(k)].value();
    }
    VecD q = solve_linear(A, b);
    VecD r = b;
    for (int i = 0; i <= m; ++i)
        for (int j = 0; j <= m; ++j) r[static_cast<size_t>(i)] -= A[static_cast<size_t>(i)][static_cast<size_t>(j)] * q[static_cast<size_t>(j)];
    const VecD d = solve_linear(A, r);
    for (int j = 0; j <= m; ++j) q[static_cast<size_t>(j)] += d[static_cast<size_t>(j)];
    return q;
}

FocalData focal_data(const VecJet& v_arc, const FrenetData& fr) {
    const int m = fr.m();
    const int dim = v_arc.dim();
    if (dim != m + 1) throw DimensionError("focal data expects a curve in R^{m+1}");
    if (v_arc.order() < m + 2)
        throw InsufficientOrder("focal data needs arc jets of order m+2");
    if (fr.arc_order < 1)
        throw InsufficientOrder("focal data needs frame jets of order >= 1");
    reject_flattening(v_arc, fr);

    const int w0 = std::min(v_arc.order() - (m + 1), fr.arc_order);

    std::vector<std::vector<Jet>> A;
    std::vector<Jet> b;
    center_system(v_arc, m, w0, A, b);
    std::vector<Jet> q = solve_linear(A, b);
    {
        // one step of iterative refinement: the ladder system can reach
        // condition numbers ~1e8 on wiggly curves, which would leak into the
        // high-order coefficients of everything derived from the center
        std::vector<Jet> r = b;
        for (int i = 0; i <= m; ++i)
            for (int j = 0; j <= m; ++j)
                r[static_cast<size_t>(i)] = r[static_cast<size_t>(i)] - A[static_cast<size_t>(i)][static_cast<size_t>(j)] * q[static_cast<size_t>(j)];
        const std::vector<Jet> d = solve_linear(A, r);
        for (int j = 0; j <= m; ++j) q[static_cast<size_t>(j)] = q[static_cast<size_t>(j)] + d[static_cast<size_t>(j)];
    }

    FocalData out;
    out.jet_order = w0;
    out.center.resize(static_cast<size_t>(dim));
    for (int j = 0; j < dim; ++j) out.center[static_cast<size_t>(j)] = q[static_cast<size_t>(j)].value();

    std::vector<Jet> disp(static_cast<size_t>(dim));
    for (int j = 0; j < dim; ++j) disp[static_cast<size_t>(j)] = q[static_cast<size_t>(j)] - v_arc[j].truncated(w0);
    out.center_jets.comp = std::move(q);

    out.c_jets.reserve(static_cast<size_t>(m));
    out.focal_curvatures.resize(static_cast<size_t>(m));
    for (int i = 1; i <= m; ++i) {
        out.c_jets.push_back(dot(disp, fr.frame_jets[static_cast<size_t>(i)]));
        out.focal_curvatures[static_cast<size_t>(i - 1)] = out.c_jets.back().value();
    }

    out.radii.resize(static_cast<size_t>(m));
    double acc = 0.0;
    for (int i = 0; i < m; ++i) {
        const double c = out.focal_curvatures[static_cast<size_t>(i)];
        acc += c * c;
        out.radii[static_cast<size_t>(i)] = std::sqrt(acc);
    }

    out.partial_centers.assign(static_cast<size_t>(m), VecD(static_cast<size_t>(dim)));
    VecD run(static_cast<size_t>(dim));
    for (int j = 0; j < dim; ++j) run[static_cast<size_t>(j)] = v_arc[j].value();
    for (int l = 1; l <= m; ++l) {
        for (int j = 0; j < dim; ++j)
            run[static_cast<size_t>(j)] += out.focal_curvatures[static_cast<size_t>(l - 1)] * fr.frame[static_cast<size_t>(l)][static_cast<size_t>(j)];
        out.partial_centers[static_cast<size_t>(l - 1)] = run;
    }

    Jet res = derive(out.c_jets[static_cast<size_t>(m - 1)]);
    if (m >= 2) res = res + out.c_jets[static_cast<size_t>(m - 2)] * fr.curvature_jets[static_cast<size_t>(m - 1)];
    out.residual_jet = res;
    out.vertex_residual = res.value();

    double rm2_deriv = 0.0;
    for (const Jet& c : out.c_jets) rm2_deriv += 2.0 * c.value() * c.derivative(1);
    const double cm = out.focal_curvatures.back();
    out.correcting_term =
        (cm != 0.0) ? rm2_deriv / (2.0 * cm) : std::numeric_limits<double>::quiet_NaN();
    return out;
}

std::vector<Jet> focal_curvatures_recursive(const FrenetData& fr) {
    const int m = fr.m();
    if (fr.arc_order < m - 1)
        throw InsufficientOrder("recursive focal curvatures need curvature jets of order m-1");
    double kscale = 0.0;
    for (double k : fr.curvatures) kscale = std::max(kscale, std::fabs(k));

    auto check_divisor = [&](const Jet& k, int index) {
        if (std::fabs(k.value()) <= 1e-12 * kscale || k.value() == 0.0)
            throw CurvatureZero("kappa_" + std::to_string(index) + " vanishes; the recursion is undefined here");
    };

    std::vector<Jet> c;
    c.reserve(static_cast<size_t>(m));
    check_divisor(fr.curvature_jets[0], 1);
    c.push_back(1.0 / fr.curvature_jets[0]);
    for (int i = 1; i < m; ++i) {
        Jet num = derive(c[static_cast<size_t>(i - 1)]);
        if (i >= 2) num = num + c[static_cast<size_t>(i - 2)] * fr.curvature_jets[static_cast<size_t>(i - 1)];
        check_divisor(fr.curvature_jets[static_cast<size_t>(i)], i + 1);
        c.push_back(num / fr.curvature_jets[static_cast<size_t>(i)]);
    }
    return c;
}

std::vector<FocalPlane> focal_planes(const VecD& point, const FrenetData& fr, const FocalData& fo) {
    const int m = fr.m();
    const int dim = m + 1;
    std::vector<FocalPlane> flag;
    flag.reserve(static_cast<size_t>(m + 1));
    VecD base = point;
    for (int k = 1; k <= m + 1; ++k) {
        FocalPlane p;
        p.codim = k;
        p.basepoint = base;
        for (int i = k; i <= m; ++i) p.directions.push_back(fr.frame[static_cast<size_t>(i)]);
        flag.push_back(std::move(p));
        if (k <= m) {
            for (int j = 0; j < dim; ++j)
                base[static_cast<size_t>(j)] += fo.focal_curvatures[static_cast<size_t>(k - 1)] * fr.frame[static_cast<size_t>(k)][static_cast<size_t>(j)];
        }
    }
    return flag;
}

int default_jet_order(int m) { return std::max(m + 3, 2 * m); }

Apparatus apparatus_at(const CurveModel& curve, double theta, int order) {
    const int m = curve.m();
    const int n = (order < 0) ? default_jet_order(m) : order;
    if (n < m + 2) throw InsufficientOrder("apparatus needs jet order >= m+2");

    Apparatus ap;
    ap.theta = theta;
    ArcNormalized an = arc_normalize(curve.eval_jet(theta, n));
    ap.speed = an.speed;
    ap.arc = std::move(an.curve);
    ap.point.resize(static_cast<size_t>(curve.dimension));
    for (int j = 0; j < curve.dimension; ++j) ap.point[static_cast<size_t>(j)] = ap.arc[j].value();
    ap.frenet = frenet_jets(ap.arc, m, n - m - 1);
    try {
        ap.focal = focal_data(ap.arc, ap.frenet);
        ap.has_focal = true;
    } catch (const FlatteningPoint&) {
    } catch (const IllConditionedSystem&) {
    }
    return ap;
}

namespace {

double segment_length(const CurveModel& curve, double a, double b) {
    // 5-point Gauss-Legendre on the speed
    static const double gx[5] = {-0.90617984593866396, -0.53846931010568311, 0.0,
                                 0.53846931010568311, 0.90617984593866396};
    static const double gw[5] = {0.23692688505618908, 0.47862867049936647, 0.56888888888888889,
                                 0.47862867049936647, 0.23692688505618908};
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < 5; ++i) {
        const VecJet v = curve.eval_jet(mid + half * gx[i], 1);
        double sq = 0.0;
        for (const Jet& c : v.comp) sq += c.derivative(1) * c.derivative(1);
        acc += gw[i] * std::sqrt(sq);
    }
    return half * acc;
}

}  // namespace

std::vector<FocalSample> focal_curve(const CurveModel& curve, int n, int order) {
    const std::vector<double> grid = sample_grid(curve, n);
    std::vector<FocalSample> out;
    out.reserve(grid.size());
    double s = 0.0;
    for (size_t i = 0; i < grid.size(); ++i) {
        if (i > 0) s += segment_length(curve, grid[i - 1], grid[i]);
        Apparatus ap = apparatus_at(curve, grid[i], order);
        FocalSample smp;
        smp.theta = grid[i];
        smp.s = s;
        smp.flattening = !ap.has_focal;
        smp.point = std::move(ap.point);
        smp.frenet = std::move(ap.frenet);
        smp.frenet.speed = ap.speed;  // frenet_jets ran on the unit-speed curve
        if (ap.has_focal) smp.focal = std::move(ap.focal);
        out.push_back(std::move(smp));
    }
    return out;
}

}  // namespace focalis
