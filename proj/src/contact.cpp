#include "focalis/contact.hpp"

#include <algorithm>
#include <cmath>

namespace focalis {

ContactQuery ContactQuery::sphere(VecD center, double radius) {
    ContactQuery q;
    q.kind = Kind::Sphere;
    q.center = std::move(center);
    q.radius = radius;
    return q;
}

ContactQuery ContactQuery::affine(VecD basepoint, MatD directions) {
    ContactQuery q;
    q.kind = Kind::Affine;
    q.basepoint = std::move(basepoint);
    q.directions = std::move(directions);
    return q;
}

namespace {

// Per-degree growth rate of the curve's Taylor coefficients, used to keep the
// vanishing test meaningful at high orders.
double coefficient_growth(const VecJet& v) {
    double sigma = 1.0;
    for (int k = 1; k <= v.order(); ++k) {
        double sq = 0.0;
        for (const Jet& c : v.comp) sq += c[k] * c[k];
        if (sq > 0.0) sigma = std::max(sigma, std::pow(std::sqrt(sq), 1.0 / k));
    }
    return sigma;
}

// First index whose coefficient survives the per-degree tolerance; -1 when
// all of 0..n_max vanish. `lead` receives the surviving coefficient.
int first_nonvanishing(const std::vector<Jet>& fns, int n_max, double base, double sigma,
                       double* lead) {
    double tol = 1e-8 * base;
    for (int k = 0; k <= n_max; ++k) {
        for (const Jet& f : fns) {
            if (std::fabs(f[k]) > tol) {
                *lead = f[k];
                return k;
            }
        }
        tol *= sigma;
    }
    return -1;
}

// Orthonormal basis of the orthogonal complement of the given rows.
MatD annihilator(const MatD& directions, int dim) {
    MatD out;
    for (int j = 0; j < dim && static_cast<int>(out.size() + directions.size()) < dim; ++j) {
        VecD u(static_cast<size_t>(dim), 0.0);
        u[static_cast<size_t>(j)] = 1.0;
        for (int pass = 0; pass < 2; ++pass) {
            for (const VecD& d : directions) {
                const double p = dot(u, d);
                for (int i = 0; i < dim; ++i) u[static_cast<size_t>(i)] -= p * d[static_cast<size_t>(i)];
            }
            for (const VecD& d : out) {
                const double p = dot(u, d);
                for (int i = 0; i < dim; ++i) u[static_cast<size_t>(i)] -= p * d[static_cast<size_t>(i)];
            }
        }
        const double n = norm(u);
        if (n > 1e-8) {
            for (double& x : u) x /= n;
            out.push_back(std::move(u));
        }
    }
    return out;
}

}  // namespace

ContactResult contact_order(const VecJet& v, const ContactQuery& query, int n_max) {
    if (v.order() < n_max)
        throw InsufficientOrder("contact test to order " + std::to_string(n_max) +
                                " needs curve jets of that order");
    const int dim = v.dim();
    const double sigma = coefficient_growth(v);
    double pt_norm = 0.0;
    for (const Jet& c : v.comp) pt_norm += c.value() * c.value();
    pt_norm = std::sqrt(pt_norm);

    std::vector<Jet> fns;
    double base = 1.0;
    if (query.kind == ContactQuery::Kind::Sphere) {
        if (static_cast<int>(query.center.size()) != dim)
            throw DimensionError("contact query dimension mismatch");
        Jet f = Jet::constant(-0.5 * query.radius * query.radius, n_max);
        for (int j = 0; j < dim; ++j) {
            const Jet d = v[j].truncated(n_max) - query.center[static_cast<size_t>(j)];
            f += 0.5 * (d * d);
        }
        fns.push_back(f);
        const double M = std::max({1.0, pt_norm, norm(query.center), std::fabs(query.radius)});
        base = M * M;
    } else {
        if (static_cast<int>(query.basepoint.size()) != dim)
            throw DimensionError("contact query dimension mismatch");
        const MatD normals = annihilator(query.directions, dim);
        for (const VecD& u : normals) {
            Jet f = Jet::constant(0.0, n_max);
            for (int j = 0; j < dim; ++j)
                f += (v[j].truncated(n_max) - query.basepoint[static_cast<size_t>(j)]) * u[static_cast<size_t>(j)];
            fns.push_back(f);
        }
        base = std::max({1.0, pt_norm, norm(query.basepoint)});
    }

    ContactResult res;
    if (fns.empty()) {  // the whole space: contact of any order
        res.order = n_max;
        res.at_least = true;
        return res;
    }
    double lead = 0.0;
    const int k = first_nonvanishing(fns, n_max, base, sigma, &lead);
    if (k < 0) {
        res.order = n_max;
        res.at_least = true;
    } else {
        res.order = k;
        res.leading_coefficient = lead;
    }
    return res;
}

ContactResult osculating_sphere_contact(const VecJet& v, const FrenetData& fr,
                                        const FocalData& fo, int l, int n_max) {
    const int m = fr.m();
    if (l < 1 || l > m) throw DomainError("osculating sphere index out of range");

    if (l == m)
        return contact_order(v, ContactQuery::sphere(fo.center, fo.radii.back()), n_max);

    const ContactResult sph = contact_order(
        v, ContactQuery::sphere(fo.partial_centers[static_cast<size_t>(l - 1)], fo.radii[static_cast<size_t>(l - 1)]), n_max);

    VecD p(static_cast<size_t>(v.dim()));
    for (int j = 0; j < v.dim(); ++j) p[static_cast<size_t>(j)] = v[j].value();
    MatD dirs(fr.frame.begin(), fr.frame.begin() + l + 1);  // t, n_1..n_l
    const ContactResult pl = contact_order(v, ContactQuery::affine(std::move(p), std::move(dirs)), n_max);

    const int es = sph.at_least ? n_max + 1 : sph.order;
    const int ep = pl.at_least ? n_max + 1 : pl.order;
    return (es <= ep) ? sph : pl;
}

}  // namespace focalis
