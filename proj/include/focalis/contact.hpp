#pragma once

#include <vector>

#include "focalis/focal.hpp"
#include "focalis/frenet.hpp"
#include "focalis/jet.hpp"
#include "focalis/linalg.hpp"

namespace focalis {

// A sphere or affine subspace to test the curve against. Affine subspaces
// are given by a point and orthonormal direction rows (empty for a single
// point, m rows for a hyperplane).
struct ContactQuery {
    enum class Kind { Sphere, Affine };
    Kind kind = Kind::Sphere;
    VecD center;
    double radius = 0.0;
    VecD basepoint;
    MatD directions;

    static ContactQuery sphere(VecD center, double radius);
    static ContactQuery affine(VecD basepoint, MatD directions);
};

struct ContactResult {
    int order = 0;  // k-point contact; order >= 1 iff the set passes through the point
    bool at_least = false;  // true when every coefficient through n_max vanished
    double leading_coefficient = 0.0;  // first surviving derivative value
};

// Multiplicity of the zero of the defining functions along the curve at the
// jet's expansion point. v needs order >= n_max.
ContactResult contact_order(const VecJet& v, const ContactQuery& query, int n_max);

// Contact of the curve with its own osculating l-sphere: the intersection of
// the osculating hypersphere with the osculating (l+1)-plane, which is the
// sphere of radius R_l about gamma_l inside that plane.
ContactResult osculating_sphere_contact(const VecJet& v, const FrenetData& fr,
                                        const FocalData& fo, int l, int n_max);

}  // namespace focalis
