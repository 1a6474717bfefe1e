#include "focalis/frenet.hpp"

#include <cmath>
#include <string>

namespace focalis {

namespace {

std::vector<Jet> derivative_vector(const VecJet& v, int k) {
    std::vector<Jet> d(v.comp.begin(), v.comp.end());
    for (int i = 0; i < k; ++i)
        for (auto& j : d) j = derive(j);
    return d;
}

Jet dot_jets(const std::vector<Jet>& a, const std::vector<Jet>& b) {
    Jet s = a[0] * b[0];
    for (size_t i = 1; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

ArcNormalized arc_normalize(const VecJet& v) {
    const int n = v.order();
    Jet sq = Jet::constant(0.0, n > 0 ? n - 1 : 0);
    for (const Jet& c : v.comp) {
        const Jet d = derive(c);
        sq += d * d;
    }
    if (!(sq.value() > 1e-24)) {
        throw SingularParametrization("curve velocity vanishes at the expansion point");
    }
    const Jet speed = sqrt(sq);
    const Jet s = integrate(speed, 0.0);          // s(theta), order n
    const Jet theta_of_s = revert(s.truncated(n));  // theta(s), order n

    ArcNormalized out;
    out.speed = speed.value();
    out.s_of_theta = s;
    out.curve.comp.reserve(v.comp.size());
    for (const Jet& c : v.comp) {
        // recenter so the composition argument has zero constant term
        Jet shifted = c;
        shifted.set(0, 0.0);
        Jet composed = compose(shifted, theta_of_s);
        composed.set(0, c.value());
        out.curve.comp.push_back(composed);
    }
    return out;
}

GoodnessReport is_good(const VecJet& v, int m) {
    GoodnessReport rep;
    if (v.order() < m + 1) throw InsufficientOrder("goodness test needs jets of order m+1");
    const int dim = v.dim();

    // Normalized leading Gram determinants of the first m derivatives. Each
    // is det(Gram)/prod |d_i|^2, which lies in [0,1] by Hadamard.
    std::vector<VecD> d(static_cast<size_t>(m));
    for (int k = 1; k <= m; ++k) {
        d[static_cast<size_t>(k - 1)].resize(static_cast<size_t>(dim));
        for (int i = 0; i < dim; ++i) d[static_cast<size_t>(k - 1)][static_cast<size_t>(i)] = v[i].derivative(k);
    }
    double min_det = 1.0;
    for (int k = 1; k <= m; ++k) {
        MatD g(static_cast<size_t>(k), VecD(static_cast<size_t>(k)));
        double scale = 1.0;
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j) g[static_cast<size_t>(i)][static_cast<size_t>(j)] = dot(d[static_cast<size_t>(i)], d[static_cast<size_t>(j)]);
            scale *= g[static_cast<size_t>(i)][static_cast<size_t>(i)];
        }
        const double det = det_laplace(g);
        const double nd = (scale > 0.0) ? det / scale : 0.0;
        min_det = std::min(min_det, nd);
    }
    rep.min_gram_det = min_det;
    rep.is_good = min_det > kGoodnessTol;
    if (!rep.is_good) return rep;

    try {
        const ArcNormalized an = arc_normalize(v);
        const FrenetData fr = frenet_at(an.curve, m);
        rep.is_flattening = std::fabs(fr.curvatures.back()) < kFlatteningTol * fr.curvatures.front();
    } catch (const Error&) {
        rep.is_good = false;
    }
    return rep;
}

FrenetData frenet_jets(const VecJet& v_arc, int m, int order) {
    const int w = v_arc.order();
    if (w < m + 1 + order) {
        throw InsufficientOrder("frame jets of order " + std::to_string(order) + " need curve jets of order " +
                                std::to_string(m + 1 + order));
    }
    const int dim = v_arc.dim();
    if (dim != m + 1) throw DimensionError("frame computation expects a curve in R^{m+1}");
    if (std::fabs(dot_jets(derivative_vector(v_arc, 1), derivative_vector(v_arc, 1)).value() - 1.0) > 1e-6) {
        throw SingularParametrization("frame computation expects an arc length parametrization");
    }

    const int wf = w - m;  // uniform order of the frame jets

    std::vector<std::vector<Jet>> e;  // rows t, n1..n_{m-1}
    e.reserve(static_cast<size_t>(m + 1));
    std::vector<Jet> d = derivative_vector(v_arc, 1);
    for (int i = 1; i <= m; ++i) {
        std::vector<Jet> u(d.begin(), d.end());
        for (auto& c : u) c = c.truncated(wf);
        // modified Gram-Schmidt with one re-orthogonalization pass
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& prev : e) {
                const Jet proj = dot_jets(u, prev);
                for (int j = 0; j < dim; ++j) u[static_cast<size_t>(j)] -= proj * prev[static_cast<size_t>(j)];
            }
        }
        const Jet nrm2 = dot_jets(u, u);
        if (!(nrm2.value() > 1e-20)) {
            throw NotGoodCurve("derivatives of order 1.." + std::to_string(i) + " are linearly dependent here");
        }
        const Jet nrm = sqrt(nrm2);
        for (auto& c : u) c = c / nrm;
        e.push_back(std::move(u));
        if (i < m) {
            for (auto& c : d) c = derive(c);
        }
    }

    // last normal by generalized cross product, which also fixes det = +1
    {
        std::vector<Jet> nm = cross_completion(e);
        const Jet nrm = sqrt(dot_jets(nm, nm));
        for (auto& c : nm) c = c / nrm;
        e.push_back(std::move(nm));
    }

    FrenetData out;
    out.arc_order = order;
    out.frame_jets.resize(static_cast<size_t>(m + 1));
    for (int i = 0; i <= m; ++i) {
        out.frame_jets[static_cast<size_t>(i)].reserve(static_cast<size_t>(dim));
        for (int j = 0; j < dim; ++j) out.frame_jets[static_cast<size_t>(i)].push_back(e[static_cast<size_t>(i)][static_cast<size_t>(j)].truncated(order));
    }
    out.curvature_jets.reserve(static_cast<size_t>(m));
    for (int i = 1; i <= m; ++i) {
        std::vector<Jet> dprev(e[static_cast<size_t>(i - 1)].begin(), e[static_cast<size_t>(i - 1)].end());
        for (auto& c : dprev) c = derive(c);
        out.curvature_jets.push_back(dot_jets(dprev, e[static_cast<size_t>(i)]).truncated(order));
    }

    out.frame.resize(static_cast<size_t>(m + 1), VecD(static_cast<size_t>(dim)));
    for (int i = 0; i <= m; ++i)
        for (int j = 0; j < dim; ++j) out.frame[static_cast<size_t>(i)][static_cast<size_t>(j)] = e[static_cast<size_t>(i)][static_cast<size_t>(j)].value();
    out.curvatures.resize(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) out.curvatures[static_cast<size_t>(i)] = out.curvature_jets[static_cast<size_t>(i)].value();
    return out;
}

FrenetData frenet_at(const VecJet& v_arc, int m) { return frenet_jets(v_arc, m, 0); }

}  // namespace focalis
