#pragma once

#include <vector>

#include "focalis/jet.hpp"
#include "focalis/linalg.hpp"

namespace focalis {

// Normalized leading Gram determinants below this are treated as a failure of
// derivative independence.
constexpr double kGoodnessTol = 1e-10;
// |kappa_m| below this multiple of kappa_1 counts as a flattening.
constexpr double kFlatteningTol = 1e-9;

struct FrenetData {
    MatD frame;        // rows t, n1..nm; orthonormal, det +1
    VecD curvatures;   // kappa_1..kappa_m; all but the last positive
    double speed = 1.0;  // ds/dtheta at the expansion point

    // Populated by frenet_jets: every frame component and curvature as a jet
    // in arc length about the point.
    std::vector<std::vector<Jet>> frame_jets;
    std::vector<Jet> curvature_jets;
    int arc_order = -1;

    int m() const { return static_cast<int>(curvatures.size()); }
};

struct GoodnessReport {
    bool is_good = false;
    double min_gram_det = 0.0;  // scale-normalized, in [0, 1]
    bool is_flattening = false;
};

struct ArcNormalized {
    VecJet curve;    // gamma as a function of arc length s, centered at s = 0
    Jet s_of_theta;  // s as a jet in theta about the point, s(theta0) = 0
    double speed = 1.0;
};

ArcNormalized arc_normalize(const VecJet& v);

GoodnessReport is_good(const VecJet& v, int m);

// v_arc must be arc normalized with order >= m+1.
FrenetData frenet_at(const VecJet& v_arc, int m);

// Runs the whole frame pipeline in jet arithmetic; v_arc order >= m+1+order.
FrenetData frenet_jets(const VecJet& v_arc, int m, int order);

}  // namespace focalis
