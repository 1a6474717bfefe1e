#include "focalis/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace focalis {

namespace {

struct GridData {
    std::vector<double> thetas;
    std::vector<Apparatus> aps;
    double kappa1_max = 0.0;
    double pole_tol = 0.0;

    // focal data usable and safely away from flattening poles
    bool kept(size_t i) const {
        const Apparatus& ap = aps[i];
        return ap.has_focal && std::fabs(ap.frenet.curvatures.back()) >= pole_tol;
    }
};

// Measuring the focal curve's own frame amplifies roundoff like
// (scale/|rho|)^3 near vertices, so "non-vertex sample" means a healthy
// margin, not just nonzero.
constexpr double kVertexGuard = 5e-2;

// The focal curve's jets can be built two ways (linear solve, c_i recursion);
// when the frames measured from them disagree beyond this, the top jet
// coefficients are input-limited and the sample proves nothing either way.
// Trustworthy samples sit below 1e-8 in practice.
constexpr double kCrossCheckTol = 1e-7;

GridData evaluate_grid(const CurveModel& curve, int samples, int order = -1) {
    GridData g;
    g.thetas = sample_grid(curve, samples);
    g.aps.reserve(g.thetas.size());
    for (double th : g.thetas) {
        g.aps.push_back(apparatus_at(curve, th, order));
        g.kappa1_max = std::max(g.kappa1_max, g.aps.back().frenet.curvatures.front());
    }
    g.pole_tol = 1e-3 * g.kappa1_max;
    return g;
}

void finalize(ResidualReport& rep) {
    rep.max_abs = 0.0;
    for (double r : rep.residuals) rep.max_abs = std::max(rep.max_abs, std::fabs(r));
}

double wrap_distance(const CurveModel& curve, double a, double b) {
    double d = std::fabs(a - b);
    if (curve.periodic) d = std::min(d, std::fabs(curve.period() - d));
    return d;
}

double dist_signed(const VecD& a, const VecD& b, double sign) {
    double sq = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - sign * b[i];
        sq += d * d;
    }
    return std::sqrt(sq);
}

// distance of v from the span of orthonormal rows
double off_span(const VecD& v, const MatD& rows, size_t first, size_t last) {
    VecD r = v;
    for (size_t k = first; k <= last; ++k) {
        const double p = dot(r, rows[k]);
        for (size_t j = 0; j < r.size(); ++j) r[j] -= p * rows[k][j];
    }
    return norm(r);
}

// Extended-precision truncated series, just enough for the derivative-ladder
// frame of the focal curve. Measuring the m-th curvature of a curve whose
// curvature ladder is steep (K ~ kappa/|rho|) loses ~3 digits per decade of
// ladder growth in double; the focal curve hits that routinely, the base
// curve does not.
struct XS {
    std::vector<long double> a;
    explicit XS(int n = 0) : a(static_cast<size_t>(n) + 1, 0.0L) {}
    int order() const { return static_cast<int>(a.size()) - 1; }
};

XS xadd(const XS& x, const XS& y) {
    XS r(std::min(x.order(), y.order()));
    for (int i = 0; i <= r.order(); ++i) r.a[static_cast<size_t>(i)] = x.a[static_cast<size_t>(i)] + y.a[static_cast<size_t>(i)];
    return r;
}
XS xsub(const XS& x, const XS& y) {
    XS r(std::min(x.order(), y.order()));
    for (int i = 0; i <= r.order(); ++i) r.a[static_cast<size_t>(i)] = x.a[static_cast<size_t>(i)] - y.a[static_cast<size_t>(i)];
    return r;
}
XS xmul(const XS& x, const XS& y) {
    XS r(std::min(x.order(), y.order()));
    for (int i = 0; i <= std::min(r.order(), x.order()); ++i)
        for (int j = 0; i + j <= r.order() && j <= y.order(); ++j)
            r.a[static_cast<size_t>(i + j)] += x.a[static_cast<size_t>(i)] * y.a[static_cast<size_t>(j)];
    return r;
}
XS xderive(const XS& x) {
    if (x.order() == 0) return XS(0);
    XS r(x.order() - 1);
    for (int i = 1; i <= x.order(); ++i) r.a[static_cast<size_t>(i - 1)] = x.a[static_cast<size_t>(i)] * static_cast<long double>(i);
    return r;
}
XS xdiv(const XS& x, const XS& y) {
    XS r(std::min(x.order(), y.order()));
    for (int i = 0; i <= r.order(); ++i) {
        long double s = (i <= x.order()) ? x.a[static_cast<size_t>(i)] : 0.0L;
        for (int j = 1; j <= i && j <= y.order(); ++j) s -= y.a[static_cast<size_t>(j)] * r.a[static_cast<size_t>(i - j)];
        r.a[static_cast<size_t>(i)] = s / y.a[0];
    }
    return r;
}
XS xsqrt(const XS& x) {
    XS r(x.order());
    r.a[0] = sqrtl(x.a[0]);
    for (int i = 1; i <= x.order(); ++i) {
        long double s = x.a[static_cast<size_t>(i)];
        for (int j = 1; j < i; ++j) s -= r.a[static_cast<size_t>(j)] * r.a[static_cast<size_t>(i - j)];
        r.a[static_cast<size_t>(i)] = s / (2.0L * r.a[0]);
    }
    return r;
}
XS xdet(const std::vector<std::vector<XS>>& M) {
    const int k = static_cast<int>(M.size());
    if (k == 1) return M[0][0];
    XS acc(M[0][0].order());
    for (int c = 0; c < k; ++c) {
        std::vector<std::vector<XS>> sm;
        for (int r = 1; r < k; ++r) {
            std::vector<XS> row;
            for (int cc = 0; cc < k; ++cc)
                if (cc != c) row.push_back(M[static_cast<size_t>(r)][static_cast<size_t>(cc)]);
            sm.push_back(std::move(row));
        }
        const XS t = xmul(M[0][static_cast<size_t>(c)], xdet(sm));
        acc = (c % 2 == 0) ? xadd(acc, t) : xsub(acc, t);
    }
    return acc;
}

// Frenet frame and curvatures of a regular (not unit-speed) curve given as
// jets: MGS of the derivative ladder plus one chain-rule division by the
// speed per curvature. Parametrization invariant, no series reversion.
void ladder_frame(const VecJet& v, int m, MatD& frame, VecD& kappas) {
    const int d = m + 1;
    std::vector<std::vector<XS>> der;
    {
        std::vector<XS> cur;
        for (const Jet& j : v.comp) {
            XS x(v.order());
            for (int i = 0; i <= v.order(); ++i) x.a[static_cast<size_t>(i)] = j[i];
            cur.push_back(std::move(x));
        }
        for (int k = 0; k <= d; ++k) {
            if (k > 0)
                for (XS& c : cur) c = xderive(c);
            der.push_back(cur);
        }
    }
    std::vector<std::vector<XS>> e;
    for (int i = 1; i <= m; ++i) {
        std::vector<XS> w = der[static_cast<size_t>(i)];
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& prev : e) {
                XS p = xmul(w[0], prev[0]);
                for (int j = 1; j < d; ++j) p = xadd(p, xmul(w[static_cast<size_t>(j)], prev[static_cast<size_t>(j)]));
                for (int j = 0; j < d; ++j) w[static_cast<size_t>(j)] = xsub(w[static_cast<size_t>(j)], xmul(p, prev[static_cast<size_t>(j)]));
            }
        XS n2 = xmul(w[0], w[0]);
        for (int j = 1; j < d; ++j) n2 = xadd(n2, xmul(w[static_cast<size_t>(j)], w[static_cast<size_t>(j)]));
        if (n2.a[0] <= 0.0L) throw NotGoodCurve("derivative ladder of the focal curve degenerates");
        const XS nn = xsqrt(n2);
        for (int j = 0; j < d; ++j) w[static_cast<size_t>(j)] = xdiv(w[static_cast<size_t>(j)], nn);
        e.push_back(std::move(w));
    }
    {
        std::vector<XS> last;
        for (int col = 0; col < d; ++col) {
            std::vector<std::vector<XS>> minor;
            for (int r0 = 0; r0 < m; ++r0) {
                std::vector<XS> row;
                for (int c0 = 0; c0 < d; ++c0)
                    if (c0 != col) row.push_back(e[static_cast<size_t>(r0)][static_cast<size_t>(c0)]);
                minor.push_back(std::move(row));
            }
            XS cof = xdet(minor);
            if ((m + col) % 2 != 0)
                for (long double& vv : cof.a) vv = -vv;
            last.push_back(std::move(cof));
        }
        XS n2 = xmul(last[0], last[0]);
        for (int j = 1; j < d; ++j) n2 = xadd(n2, xmul(last[static_cast<size_t>(j)], last[static_cast<size_t>(j)]));
        const XS nn = xsqrt(n2);
        for (int j = 0; j < d; ++j) last[static_cast<size_t>(j)] = xdiv(last[static_cast<size_t>(j)], nn);
        e.push_back(std::move(last));
    }
    XS sp2 = xmul(der[1][0], der[1][0]);
    for (int j = 1; j < d; ++j) sp2 = xadd(sp2, xmul(der[1][static_cast<size_t>(j)], der[1][static_cast<size_t>(j)]));
    const long double speed = sqrtl(sp2.a[0]);

    frame.assign(static_cast<size_t>(d), VecD(static_cast<size_t>(d)));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) frame[static_cast<size_t>(i)][static_cast<size_t>(j)] = static_cast<double>(e[static_cast<size_t>(i)][static_cast<size_t>(j)].a[0]);
    kappas.assign(static_cast<size_t>(m), 0.0);
    for (int i = 0; i < m; ++i) {
        XS dotv = xmul(xderive(e[static_cast<size_t>(i)][0]), e[static_cast<size_t>(i) + 1][0]);
        for (int j = 1; j < d; ++j)
            dotv = xadd(dotv, xmul(xderive(e[static_cast<size_t>(i)][static_cast<size_t>(j)]), e[static_cast<size_t>(i) + 1][static_cast<size_t>(j)]));
        kappas[static_cast<size_t>(i)] = static_cast<double>(dotv.a[0] / speed);
    }
}

}  // namespace

FocalFrameData focal_frenet(const CurveModel& curve, double theta) {
    const int m = curve.m();
    ArcNormalized an = arc_normalize(curve.eval_jet(theta, 2 * m + 4));
    FrenetData fr = frenet_jets(an.curve, m, m + 3);
    FocalData fo = focal_data(an.curve, fr);

    const double cm1km =
        (m >= 2 ? fo.focal_curvatures[static_cast<size_t>(m - 2)] : 0.0) * fr.curvatures.back();
    const double scale =
        std::max({1.0, std::fabs(fo.c_jets.back().derivative(1)), std::fabs(cm1km)});
    if (std::fabs(fo.vertex_residual) < 1e-8 * scale) throw VertexPoint();

    FocalFrameData out;
    ladder_frame(fo.center_jets, m, out.frame, out.curvatures);
    out.vertex_residual = fo.vertex_residual;
    out.eps = fo.vertex_residual > 0.0 ? 1 : -1;
    const double km = fr.curvatures.back();
    out.delta.reserve(static_cast<size_t>(m > 0 ? m - 1 : 0));
    for (int k = 1; k <= m - 1; ++k) {
        const double v = ((k % 2 == 0) ? 1.0 : -1.0) * out.eps * km;
        out.delta.push_back(v > 0.0 ? 1 : -1);
    }

    // Rebuild the focal curve from the recursion form of the c_i and measure
    // again; the spread bounds how much of the measurement is real.
    out.cross_check = 1.0;
    try {
        std::vector<Jet> rec = focal_curvatures_recursive(fr);
        const int w = rec.back().order();
        VecJet crec = an.curve;
        for (int j = 0; j <= m; ++j) {
            crec[j] = crec[j].truncated(w);
            for (int i = 0; i < m; ++i)
                crec[j] = crec[j] + rec[static_cast<size_t>(i)].truncated(w) *
                                        fr.frame_jets[static_cast<size_t>(i + 1)][j].truncated(w);
        }
        MatD frame2;
        VecD kap2;
        ladder_frame(crec, m, frame2, kap2);
        double spread = 0.0;
        for (int k = 0; k < m; ++k)
            spread = std::max(spread, std::fabs(out.curvatures[static_cast<size_t>(k)] - kap2[static_cast<size_t>(k)]) /
                                          std::max(1.0, std::fabs(out.curvatures[static_cast<size_t>(k)])));
        for (size_t r = 0; r < out.frame.size(); ++r)
            for (size_t j = 0; j < out.frame[r].size(); ++j)
                spread = std::max(spread, std::fabs(out.frame[r][j] - frame2[r][j]));
        out.cross_check = spread;
    } catch (const Error&) {
        // leave cross_check pessimistic
    }
    return out;
}

ResidualReport check_scalar_frenet(const CurveModel& curve, int samples, bool corrected) {
    const int m = curve.m();
    GridData g = evaluate_grid(curve, samples);
    ResidualReport rep;
    rep.name = corrected ? "scalar_frenet_corrected" : "scalar_frenet";

    for (size_t i = 0; i < g.thetas.size(); ++i) {
        if (!g.kept(i)) {
            ++rep.skipped;
            continue;
        }
        const Apparatus& ap = g.aps[i];
        const VecD& kap = ap.frenet.curvatures;
        const FocalData& fo = ap.focal;
        auto c = [&](int idx) { return idx == 0 ? 0.0 : fo.focal_curvatures[static_cast<size_t>(idx - 1)]; };
        auto cp = [&](int idx) { return idx == 0 ? 0.0 : fo.c_jets[static_cast<size_t>(idx - 1)].derivative(1); };

        double correction = 0.0;
        if (corrected) {
            const double cm = c(m);
            if (std::fabs(cm) < 1e-6 * std::max(1.0, fo.radii.back())) {
                ++rep.skipped;  // the correction is undefined where c_m = 0
                continue;
            }
            double rm2p = 0.0;
            for (int j = 1; j <= m; ++j) rm2p += 2.0 * c(j) * cp(j);
            correction = rm2p / (2.0 * cm);
        }

        double worst = std::fabs(1.0 - kap[0] * c(1)) / std::max(1.0, std::fabs(kap[0] * c(1)));
        for (int j = 1; j < m; ++j) {
            const double t1 = -kap[static_cast<size_t>(j - 1)] * c(j - 1);
            const double t2 = kap[static_cast<size_t>(j)] * c(j + 1);
            const double r = cp(j) - (t1 + t2);
            worst = std::max(worst, std::fabs(r) / std::max({1.0, std::fabs(cp(j)), std::fabs(t1), std::fabs(t2)}));
        }
        {
            const double t1 = -kap[static_cast<size_t>(m - 1)] * c(m - 1);
            const double r = cp(m) - (t1 + correction);
            worst = std::max(worst, std::fabs(r) / std::max({1.0, std::fabs(cp(m)), std::fabs(t1), std::fabs(correction)}));
        }
        rep.thetas.push_back(g.thetas[i]);
        rep.residuals.push_back(worst);
    }
    finalize(rep);
    if (rep.skipped > 0) rep.notes.push_back(std::to_string(rep.skipped) + " samples skipped");
    return rep;
}

ResidualReport check_curvature_formula(const CurveModel& curve, int samples) {
    const int m = curve.m();
    GridData g = evaluate_grid(curve, samples);
    ResidualReport rep;
    rep.name = "curvature_from_focal";
    int pair_skips = 0;

    for (size_t i = 0; i < g.thetas.size(); ++i) {
        if (!g.kept(i)) {
            ++rep.skipped;
            continue;
        }
        const Apparatus& ap = g.aps[i];
        const VecD& kap = ap.frenet.curvatures;
        const FocalData& fo = ap.focal;
        const double r2 = fo.radii.back() * fo.radii.back();
        double worst = 0.0;
        bool any = false;
        double num = 0.0;  // running sum c_1 c_1' + ... + c_{i-1} c_{i-1}'
        for (int idx = 2; idx <= m; ++idx) {
            num += fo.focal_curvatures[static_cast<size_t>(idx - 2)] * fo.c_jets[static_cast<size_t>(idx - 2)].derivative(1);
            const double den = fo.focal_curvatures[static_cast<size_t>(idx - 2)] * fo.focal_curvatures[static_cast<size_t>(idx - 1)];
            const double kv = kap[static_cast<size_t>(idx - 1)];
            if (std::fabs(den) < 1e-6 * std::max(1.0, r2) || std::fabs(kv) < 1e-9 * kap[0]) {
                ++pair_skips;
                continue;
            }
            any = true;
            worst = std::max(worst, std::fabs(kv - num / den) / std::fabs(kv));
        }
        if (!any) {
            ++rep.skipped;
            continue;
        }
        rep.thetas.push_back(g.thetas[i]);
        rep.residuals.push_back(worst);
    }
    finalize(rep);
    if (pair_skips > 0)
        rep.notes.push_back(std::to_string(pair_skips) + " degenerate (i, sample) pairs skipped");
    return rep;
}

ResidualReport check_focal_frame_ratios(const CurveModel& curve, int samples) {
    const int m = curve.m();
    GridData g = evaluate_grid(curve, samples);
    ResidualReport rep;
    rep.name = "focal_frame_ratios";
    int untrusted = 0;

    for (size_t i = 0; i < g.thetas.size(); ++i) {
        if (!g.kept(i)) {
            ++rep.skipped;
            continue;
        }
        const Apparatus& ap = g.aps[i];
        const FocalData& fo = ap.focal;
        const double cm1km =
            (m >= 2 ? fo.focal_curvatures[static_cast<size_t>(m - 2)] : 0.0) * ap.frenet.curvatures.back();
        const double vscale = std::max({1.0, std::fabs(fo.c_jets.back().derivative(1)), std::fabs(cm1km)});
        if (std::fabs(fo.vertex_residual) < kVertexGuard * vscale) {
            ++rep.skipped;  // too close to a vertex: the focal frame degenerates
            continue;
        }

        FocalFrameData fd;
        try {
            fd = focal_frenet(curve, g.thetas[i]);
        } catch (const Error&) {
            ++rep.skipped;
            continue;
        }
        if (fd.cross_check > kCrossCheckTol) {
            ++rep.skipped;
            ++untrusted;
            continue;
        }

        const VecD& kap = ap.frenet.curvatures;
        const double rho = fo.vertex_residual;
        double worst = 0.0;
        for (int k = 1; k <= m; ++k) {
            double num = fd.curvatures[static_cast<size_t>(k - 1)];
            double den = kap[static_cast<size_t>(m - k)];
            if (k == m) num = std::fabs(num);
            if (k == 1) den = std::fabs(den);
            worst = std::max(worst, std::fabs(num / den * std::fabs(rho) - 1.0));
        }

        const MatD& e = ap.frenet.frame;  // rows t, n_1..n_m
        worst = std::max(worst, dist_signed(fd.frame[0], e[static_cast<size_t>(m)], fd.eps));
        for (int k = 1; k <= m - 1; ++k) {
            worst = std::max(worst, dist_signed(fd.frame[static_cast<size_t>(k)], e[static_cast<size_t>(m - k)],
                                                fd.delta[static_cast<size_t>(k - 1)]));
        }
        const double sig = dot(fd.frame[static_cast<size_t>(m)], e[0]) >= 0.0 ? 1.0 : -1.0;
        worst = std::max(worst, dist_signed(fd.frame[static_cast<size_t>(m)], e[0], sig));

        rep.thetas.push_back(g.thetas[i]);
        rep.residuals.push_back(worst);
    }
    if (untrusted > 0)
        rep.notes.push_back(std::to_string(untrusted) +
                            " samples skipped: the two focal-jet constructions disagree there");
    finalize(rep);
    return rep;
}

ResidualReport check_radius_derivative_identity(const CurveModel& curve, int samples) {
    const int m = curve.m();
    GridData g = evaluate_grid(curve, samples);
    ResidualReport rep;
    rep.name = "radius_derivative_identity";
    rep.scale = 1.0;

    for (size_t i = 0; i < g.thetas.size(); ++i) {
        if (!g.kept(i)) {
            ++rep.skipped;
            continue;
        }
        const FocalData& fo = g.aps[i].focal;
        double lhs = 0.0;
        for (int j = 0; j < m; ++j)
            lhs += 2.0 * fo.focal_curvatures[static_cast<size_t>(j)] * fo.c_jets[static_cast<size_t>(j)].derivative(1);
        const double rhs = 2.0 * fo.focal_curvatures.back() * fo.vertex_residual;
        rep.thetas.push_back(g.thetas[i]);
        rep.residuals.push_back(lhs - rhs);
        rep.scale = std::max({rep.scale, std::fabs(lhs), std::fabs(rhs)});
    }
    finalize(rep);
    return rep;
}

SphericalReport check_spherical(const CurveModel& curve, int samples) {
    const int m = curve.m();
    GridData g = evaluate_grid(curve, samples);
    SphericalReport out;
    out.residual.name = "vertex_residual";

    double vscale = 1.0, r2scale = 1.0, rm2p_max = 0.0;
    for (size_t i = 0; i < g.thetas.size(); ++i) {
        if (!g.kept(i)) {
            ++out.residual.skipped;
            continue;
        }
        const Apparatus& ap = g.aps[i];
        const FocalData& fo = ap.focal;
        vscale = std::max(vscale, std::fabs(fo.c_jets.back().derivative(1)));
        if (m >= 2)
            vscale = std::max(vscale, std::fabs(fo.focal_curvatures[static_cast<size_t>(m - 2)] * ap.frenet.curvatures.back()));
        const double rm = fo.radii.back();
        r2scale = std::max(r2scale, rm * rm);
        double rm2p = 0.0;
        for (int j = 0; j < m; ++j)
            rm2p += 2.0 * fo.focal_curvatures[static_cast<size_t>(j)] * fo.c_jets[static_cast<size_t>(j)].derivative(1);
        rm2p_max = std::max(rm2p_max, std::fabs(rm2p));
        out.residual.thetas.push_back(g.thetas[i]);
        out.residual.residuals.push_back(fo.vertex_residual);
    }
    finalize(out.residual);
    out.residual.scale = vscale;
    out.is_spherical = out.residual.max_abs < 1e-7 * vscale && !out.residual.residuals.empty();
    out.radius_constant = rm2p_max < 1e-7 * r2scale && !out.residual.residuals.empty();

    if (m == 2) {
        double agree = 0.0;
        for (size_t i = 0; i < g.thetas.size(); ++i) {
            if (!g.kept(i)) continue;
            const Apparatus& ap = g.aps[i];
            const Jet r1 = 1.0 / ap.frenet.curvature_jets[0];
            const Jet q = derive(r1) / ap.frenet.curvature_jets[1];
            const double form = derive(q).value() + r1.value() * ap.frenet.curvatures[1];
            agree = std::max(agree, std::fabs(form - ap.focal.vertex_residual));
        }
        out.m2_form_agreement = agree / vscale;
    } else {
        out.m2_form_agreement = std::numeric_limits<double>::quiet_NaN();
    }

    // independent sphere fit: |x|^2 - 2<q,x> - beta = 0 in the unknowns (q, beta)
    {
        const int dim = m + 1;
        const int n = dim + 1;
        MatD ata(static_cast<size_t>(n), VecD(static_cast<size_t>(n), 0.0));
        VecD atb(static_cast<size_t>(n), 0.0);
        for (size_t i = 0; i < g.thetas.size(); ++i) {
            const VecD& x = g.aps[i].point;
            VecD row(static_cast<size_t>(n));
            for (int j = 0; j < dim; ++j) row[static_cast<size_t>(j)] = 2.0 * x[static_cast<size_t>(j)];
            row[static_cast<size_t>(dim)] = 1.0;
            const double y = dot(x, x);
            for (int a = 0; a < n; ++a) {
                for (int b = 0; b < n; ++b) ata[static_cast<size_t>(a)][static_cast<size_t>(b)] += row[static_cast<size_t>(a)] * row[static_cast<size_t>(b)];
                atb[static_cast<size_t>(a)] += row[static_cast<size_t>(a)] * y;
            }
        }
        try {
            const VecD sol = solve_linear(ata, atb);
            out.fitted_center.assign(sol.begin(), sol.begin() + dim);
            const double beta = sol.back();
            out.fitted_radius = std::sqrt(std::max(0.0, beta + dot(out.fitted_center, out.fitted_center)));
            double worst = 0.0;
            for (size_t i = 0; i < g.thetas.size(); ++i) {
                VecD d = g.aps[i].point;
                for (int j = 0; j < dim; ++j) d[static_cast<size_t>(j)] -= out.fitted_center[static_cast<size_t>(j)];
                worst = std::max(worst, std::fabs(norm(d) - out.fitted_radius));
            }
            out.fit_residual = worst;
            const bool fit_spherical = out.fit_residual < 1e-6 * std::max(1.0, out.fitted_radius);
            if (fit_spherical != out.is_spherical)
                out.notes.push_back("sphere fit and residual criterion disagree");
        } catch (const IllConditionedSystem&) {
            out.notes.push_back("sphere fit degenerate");
        }
    }

    if (out.radius_constant && !out.is_spherical)
        out.notes.push_back("constant osculating-hypersphere radius without sphericity");
    return out;
}

SelfCongruentReport check_self_congruent(const CurveModel& curve, int samples) {
    const int m = curve.m();
    GridData g = evaluate_grid(curve, samples);
    SelfCongruentReport out;
    out.residual.name = "constant_curvature_focal_pattern";

    VecD kmin(static_cast<size_t>(m), std::numeric_limits<double>::infinity());
    VecD kmax(static_cast<size_t>(m), -std::numeric_limits<double>::infinity());
    for (const Apparatus& ap : g.aps) {
        for (int i = 0; i < m; ++i) {
            kmin[static_cast<size_t>(i)] = std::min(kmin[static_cast<size_t>(i)], ap.frenet.curvatures[static_cast<size_t>(i)]);
            kmax[static_cast<size_t>(i)] = std::max(kmax[static_cast<size_t>(i)], ap.frenet.curvatures[static_cast<size_t>(i)]);
        }
    }
    out.applicable = true;
    for (int i = 0; i < m; ++i) {
        const double mag = std::max(std::fabs(kmin[static_cast<size_t>(i)]), std::fabs(kmax[static_cast<size_t>(i)]));
        if (kmax[static_cast<size_t>(i)] - kmin[static_cast<size_t>(i)] > 1e-7 * std::max(mag, 1e-300)) out.applicable = false;
    }
    if (!out.applicable) {
        out.residual.notes.push_back("curvatures are not constant; pattern not applicable");
        return out;
    }

    for (size_t i = 0; i < g.thetas.size(); ++i) {
        if (!g.kept(i)) {
            ++out.residual.skipped;
            continue;
        }
        const Apparatus& ap = g.aps[i];
        const VecD& kap = ap.frenet.curvatures;
        const VecD& c = ap.focal.focal_curvatures;
        const double rm = std::max(1.0, ap.focal.radii.back());
        double worst = 0.0;
        for (int idx = 2; idx <= m; idx += 2) worst = std::max(worst, std::fabs(c[static_cast<size_t>(idx - 1)]) / rm);
        double f = 1.0;  // product over kappa_{2j}/kappa_{2j+1}, kappa_0 = 1
        for (int idx = 1; idx <= m; idx += 2) {
            const double even = (idx == 1) ? 1.0 : kap[static_cast<size_t>(idx - 2)];
            f *= even / kap[static_cast<size_t>(idx - 1)];
            worst = std::max(worst, std::fabs(c[static_cast<size_t>(idx - 1)] - f) / std::max(std::fabs(f), 1e-300));
        }
        out.residual.thetas.push_back(g.thetas[i]);
        out.residual.residuals.push_back(worst);
    }
    finalize(out.residual);
    return out;
}

RadiusCriticalReport check_critical_radius_match(const CurveModel& curve, int samples) {
    const int m = curve.m();
    RadiusCriticalReport out;
    out.holds = true;
    out.min_c1 = std::numeric_limits<double>::infinity();

    const EventReport ev = classify_critical_radii(scan_events(curve, samples));
    GridData g = evaluate_grid(curve, samples);
    const size_t n = g.thetas.size();

    for (size_t i = 0; i < n; ++i)
        if (g.kept(i)) out.min_c1 = std::min(out.min_c1, g.aps[i].focal.focal_curvatures[0]);

    for (int l = 1; l <= m; ++l) {
        double rlo = std::numeric_limits<double>::infinity(), rhi = -rlo;
        for (size_t i = 0; i < n; ++i) {
            if (!g.kept(i)) continue;
            const double r = g.aps[i].focal.radii[static_cast<size_t>(l - 1)];
            rlo = std::min(rlo, r);
            rhi = std::max(rhi, r);
        }
        if (!(rhi > rlo) || rhi - rlo < 1e-9 * std::max(1.0, rhi)) {
            out.notes.push_back("R_" + std::to_string(l) +
                                " is constant on the grid: identically critical, matching skipped");
            continue;
        }

        std::vector<double> factor_zeros;
        for (const Event& e : ev.events) {
            if (l < m && e.kind == EventKind::CriticalRadius && e.l == l && !e.double_root)
                factor_zeros.push_back(e.theta);
            if (l == m && (e.kind == EventKind::Vertex || e.kind == EventKind::PseudoVertex) && !e.double_root)
                factor_zeros.push_back(e.theta);
        }

        // the derivative of R_l as seen by the jets, for refining brackets
        auto deriv_at = [&](double theta) -> std::optional<double> {
            const Apparatus ap = apparatus_at(curve, theta);
            if (!ap.has_focal || std::fabs(ap.frenet.curvatures.back()) < g.pole_tol)
                return std::nullopt;
            double d = 0.0;
            for (int j = 0; j < l; ++j)
                d += ap.focal.focal_curvatures[static_cast<size_t>(j)] * ap.focal.c_jets[static_cast<size_t>(j)].derivative(1);
            return d;
        };

        double dscale = 1e-300;
        for (size_t i = 0; i < n; ++i) {
            if (!g.kept(i)) continue;
            double d = 0.0;
            for (int j = 0; j < l; ++j)
                d += g.aps[i].focal.focal_curvatures[static_cast<size_t>(j)] * g.aps[i].focal.c_jets[static_cast<size_t>(j)].derivative(1);
            dscale = std::max(dscale, std::fabs(d));
        }

        // independent detection: local extrema of the sampled radius values
        std::vector<double> radius_zeros;
        const size_t cells = curve.periodic ? n : n - 1;
        auto rvalue = [&](size_t i) { return g.aps[i % n].focal.radii[static_cast<size_t>(l - 1)]; };
        auto usable3 = [&](size_t i) {
            return g.kept(i % n) && g.kept((i + 1) % n) && g.kept((i + 2) % n);
        };
        for (size_t i = 0; i + 1 < cells || (curve.periodic && i < cells); ++i) {
            if (!usable3(i)) continue;
            const double s0 = rvalue(i + 1) - rvalue(i);
            const double s1 = rvalue(i + 2) - rvalue(i + 1);
            if (!(s0 * s1 < 0.0)) continue;
            double a = g.thetas[i];
            double b = g.thetas[i] + 2.0 * (g.thetas[1] - g.thetas[0]);
            const std::optional<double> da = deriv_at(a);
            const std::optional<double> db = deriv_at(b);
            if (!da || !db || *da * *db >= 0.0) continue;
            double fa = *da;
            for (int it = 0; it < 200 && (b - a) > 1e-10; ++it) {
                const double mid = 0.5 * (a + b);
                const std::optional<double> fm = deriv_at(mid);
                if (!fm) { fa = std::numeric_limits<double>::quiet_NaN(); break; }
                if ((*fm > 0.0) == (fa > 0.0)) { a = mid; fa = *fm; } else { b = mid; }
            }
            if (std::isnan(fa)) continue;
            double z = 0.5 * (a + b);
            if (curve.periodic && z >= curve.domain_lo + curve.period()) z -= curve.period();
            bool dup = false;
            for (double zz : radius_zeros)
                if (wrap_distance(curve, z, zz) < 1e-8) dup = true;
            if (!dup) radius_zeros.push_back(z);
        }

        out.radius_zero_count += static_cast<int>(radius_zeros.size());
        out.factor_zero_count += static_cast<int>(factor_zeros.size());

        for (double z : radius_zeros) {
            double best = std::numeric_limits<double>::infinity();
            for (double f : factor_zeros) best = std::min(best, wrap_distance(curve, z, f));
            if (best > 1e-6) {
                out.holds = false;
                out.notes.push_back("R_" + std::to_string(l) + " extremum at theta=" + std::to_string(z) +
                                    " has no matching focal-curvature zero");
            } else {
                out.worst_mismatch = std::max(out.worst_mismatch, best);
            }
        }
        for (double f : factor_zeros) {
            const std::optional<double> df = deriv_at(f);
            if (!df) continue;  // guarded zone: no claim made there
            if (std::fabs(*df) > 1e-6 * dscale) {
                out.holds = false;
                out.notes.push_back("focal-curvature zero at theta=" + std::to_string(f) + " but R_" +
                                    std::to_string(l) + " is not critical there");
            }
        }
    }
    if (!std::isfinite(out.min_c1)) out.min_c1 = 0.0;
    return out;
}

ResidualReport check_recursive_consistency(const CurveModel& curve, int samples) {
    GridData g = evaluate_grid(curve, samples);
    ResidualReport rep;
    rep.name = "recursive_vs_projected_focal_curvatures";
    const int m = curve.m();

    for (size_t i = 0; i < g.thetas.size(); ++i) {
        if (!g.kept(i)) {
            ++rep.skipped;
            continue;
        }
        const Apparatus& ap = g.aps[i];
        std::vector<Jet> rec;
        try {
            rec = focal_curvatures_recursive(ap.frenet);
        } catch (const CurvatureZero&) {
            ++rep.skipped;
            continue;
        }
        const double floor = 1e-6 * std::max(1.0, ap.focal.radii.back());
        double worst = 0.0;
        for (int j = 0; j < m; ++j) {
            const double proj = ap.focal.focal_curvatures[static_cast<size_t>(j)];
            worst = std::max(worst, std::fabs(rec[static_cast<size_t>(j)].value() - proj) / std::max(std::fabs(proj), floor));
        }
        rep.thetas.push_back(g.thetas[i]);
        rep.residuals.push_back(worst);
    }
    finalize(rep);
    return rep;
}

ResidualReport check_flag_nesting(const CurveModel& curve, int samples) {
    GridData g = evaluate_grid(curve, samples);
    ResidualReport rep;
    rep.name = "focal_flag_nesting";
    const int m = curve.m();

    for (size_t i = 0; i < g.thetas.size(); ++i) {
        if (!g.kept(i)) {
            ++rep.skipped;
            continue;
        }
        const Apparatus& ap = g.aps[i];
        const std::vector<FocalPlane> flag = focal_planes(ap.point, ap.frenet, ap.focal);
        double worst = 0.0;

        // A^1 is normal to the curve
        for (const VecD& d : flag[0].directions)
            worst = std::max(worst, std::fabs(dot(d, ap.frenet.frame[0])));

        for (int k = 0; k < m; ++k) {
            const FocalPlane& outer = flag[static_cast<size_t>(k)];
            const FocalPlane& inner = flag[static_cast<size_t>(k + 1)];
            // direction rows orthonormal
            for (size_t a = 0; a < outer.directions.size(); ++a)
                for (size_t b = a; b < outer.directions.size(); ++b) {
                    const double want = (a == b) ? 1.0 : 0.0;
                    worst = std::max(worst, std::fabs(dot(outer.directions[a], outer.directions[b]) - want));
                }
            // inner directions inside the outer span
            for (const VecD& d : inner.directions)
                worst = std::max(worst, off_span(d, outer.directions, 0, outer.directions.size() - 1));
            // basepoint step stays inside the outer plane
            VecD diff = inner.basepoint;
            for (size_t j = 0; j < diff.size(); ++j) diff[j] -= outer.basepoint[j];
            const double dn = norm(diff);
            if (dn > 0.0)
                worst = std::max(worst, off_span(diff, outer.directions, 0, outer.directions.size() - 1) / std::max(1.0, dn));
        }
        rep.thetas.push_back(g.thetas[i]);
        rep.residuals.push_back(worst);
    }
    finalize(rep);
    return rep;
}

ResidualReport check_focal_flag(const CurveModel& curve, int samples) {
    const int m = curve.m();
    GridData g = evaluate_grid(curve, samples);
    ResidualReport rep;
    rep.name = "focal_curve_osculating_flag";
    int untrusted = 0;

    for (size_t i = 0; i < g.thetas.size(); ++i) {
        if (!g.kept(i)) {
            ++rep.skipped;
            continue;
        }
        const Apparatus& ap = g.aps[i];
        const FocalData& fo = ap.focal;
        const double cm1km =
            (m >= 2 ? fo.focal_curvatures[static_cast<size_t>(m - 2)] : 0.0) * ap.frenet.curvatures.back();
        const double vscale = std::max({1.0, std::fabs(fo.c_jets.back().derivative(1)), std::fabs(cm1km)});
        if (std::fabs(fo.vertex_residual) < kVertexGuard * vscale) {
            ++rep.skipped;
            continue;
        }
        FocalFrameData fd;
        try {
            fd = focal_frenet(curve, g.thetas[i]);
        } catch (const Error&) {
            ++rep.skipped;
            continue;
        }
        if (fd.cross_check > kCrossCheckTol) {
            ++rep.skipped;
            ++untrusted;
            continue;
        }
        const MatD& e = ap.frenet.frame;
        double worst = 0.0;
        for (int k = 1; k <= m; ++k) {
            // osculating k-plane of the focal curve vs directions of A^{m+1-k}
            for (int r = 0; r < k; ++r)
                worst = std::max(worst, off_span(fd.frame[static_cast<size_t>(r)], e, static_cast<size_t>(m + 1 - k), static_cast<size_t>(m)));
        }
        rep.thetas.push_back(g.thetas[i]);
        rep.residuals.push_back(worst);
    }
    if (untrusted > 0)
        rep.notes.push_back(std::to_string(untrusted) +
                            " samples skipped: the two focal-jet constructions disagree there");
    finalize(rep);
    return rep;
}

}  // namespace focalis
