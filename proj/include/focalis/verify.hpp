#pragma once

#include <string>
#include <vector>

#include "focalis/curve.hpp"
#include "focalis/events.hpp"
#include "focalis/focal.hpp"

namespace focalis {

struct ResidualReport {
    std::string name;
    std::vector<double> thetas;     // samples that entered the statistics
    std::vector<double> residuals;  // one value per kept sample
    double max_abs = 0.0;
    double scale = 1.0;
    int skipped = 0;
    std::vector<std::string> notes;
};

// Frenet apparatus of the focal curve, with the sign bookkeeping relating it
// back to the base curve's frame.
struct FocalFrameData {
    MatD frame;       // rows T, N_1..N_m
    VecD curvatures;  // K_1..K_m
    int eps = 1;             // sign of the vertex residual
    std::vector<int> delta;  // sign((-1)^k eps kappa_m) for k = 1..m-1
    double vertex_residual = 0.0;
    // Disagreement between the two available constructions of the focal
    // curve's jets (linear solve vs the c_i recursion). Large values mean the
    // measured frame cannot be trusted at that sample.
    double cross_check = 0.0;
};

// Frame and curvatures of the focal curve at one parameter value. Runs the
// whole pipeline at jet order 2m+4. Throws VertexPoint where the focal curve
// is stationary and FlatteningPoint where it escapes to infinity.
FocalFrameData focal_frenet(const CurveModel& curve, double theta);

// Residuals of the tridiagonal relations between focal curvatures and
// curvatures: 1 = kappa_1 c_1, c_j' = -kappa_j c_{j-1} + kappa_{j+1} c_{j+1},
// and the last row either plain (valid on spherical curves) or with the
// (R_m^2)'/(2 c_m) correction. Rows are normalized by their term magnitudes.
ResidualReport check_scalar_frenet(const CurveModel& curve, int samples, bool corrected);

// kappa_i against (c_1 c_1' + ... + c_{i-1} c_{i-1}') / (c_{i-1} c_i),
// relative error, skipping samples where the denominator degenerates.
ResidualReport check_curvature_formula(const CurveModel& curve, int samples);

// Focal-curve curvature ratios K_1/|kappa_m| = ... = |K_m|/kappa_1
// = 1/|vertex residual| plus the frame identifications T = eps n_m,
// N_k = (-1)^k eps sign(kappa_m) n_{m-k}, N_m = +-t.
ResidualReport check_focal_frame_ratios(const CurveModel& curve, int samples);

// (R_m^2)' = 2 c_m (c_m' + c_{m-1} kappa_m); absolute residual, scale kept
// alongside.
ResidualReport check_radius_derivative_identity(const CurveModel& curve, int samples);

struct SphericalReport {
    bool is_spherical = false;
    bool radius_constant = false;  // (R_m^2)' vanishes on the grid
    ResidualReport residual;       // normalized vertex residual
    double m2_form_agreement = 0.0;  // m = 2: the (R_1'/tau)' + R_1 tau form vs the residual
    VecD fitted_center;  // independent least-squares sphere fit
    double fitted_radius = 0.0;
    double fit_residual = 0.0;
    std::vector<std::string> notes;
};

// Detects spherical curves by the vanishing of the vertex residual and
// cross-checks with a direct sphere fit. Flags the constant-radius
// counterexample (radius constant yet not spherical).
SphericalReport check_spherical(const CurveModel& curve, int samples);

struct SelfCongruentReport {
    bool applicable = false;  // curvatures constant along the grid
    ResidualReport residual;  // c_{even} = 0 and the odd product formula
};

SelfCongruentReport check_self_congruent(const CurveModel& curve, int samples);

struct RadiusCriticalReport {
    bool holds = false;
    double worst_mismatch = 0.0;  // largest pairing distance, radians of parameter
    int radius_zero_count = 0;    // extrema of some R_l found by grid differencing
    int factor_zero_count = 0;    // refined zeros of c_l, c_{l+1} (resp. vertex/pseudo-vertex)
    double min_c1 = 0.0;
    std::vector<std::string> notes;
};

// Criticality of each R_l happens exactly at zeros of c_l or c_{l+1}
// (vertices / pseudo-vertices for l = m): extrema are located independently
// by differencing R_l over the grid, then matched against refined events.
RadiusCriticalReport check_critical_radius_match(const CurveModel& curve, int samples);

// Recursive focal curvatures against the linear-solve projections.
ResidualReport check_recursive_consistency(const CurveModel& curve, int samples);

// A^1 > A^2 > ... > A^{m+1}: orthonormal directions, nested spans, basepoint
// steps inside the enclosing plane, A^1 normal to the tangent.
ResidualReport check_flag_nesting(const CurveModel& curve, int samples);

// The osculating k-plane of the focal curve spans the same directions as the
// focal plane A^{m+1-k} of the base curve.
ResidualReport check_focal_flag(const CurveModel& curve, int samples);

}  // namespace focalis
