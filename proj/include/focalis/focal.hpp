#pragma once

#include <vector>

#include "focalis/curve.hpp"
#include "focalis/frenet.hpp"
#include "focalis/jet.hpp"
#include "focalis/linalg.hpp"

namespace focalis {

// Everything attached to the osculating hypersphere at one point: its center,
// the signed distances c_i of the center along each normal, the radii of the
// osculating l-spheres, and the centers gamma_l of those spheres.
struct FocalData {
    VecD center;            // center of the osculating hypersphere
    VecD focal_curvatures;  // c_1..c_m
    VecD radii;             // R_1..R_m, R_l = sqrt(c_1^2 + ... + c_l^2)
    MatD partial_centers;   // rows gamma_1..gamma_m; gamma_m ~ center

    // c_m' + c_{m-1} kappa_m, the speed of the focal curve along n_m. Zero at
    // vertices; identically zero exactly on spherical curves.
    double vertex_residual = 0.0;
    // (R_m^2)'/(2 c_m), the last-row correction of the scalar Frenet system.
    // NaN where c_m = 0.
    double correcting_term = 0.0;

    VecJet center_jets;       // center as jets in arc length
    std::vector<Jet> c_jets;  // c_1..c_m as jets in arc length
    Jet residual_jet;         // vertex residual as a jet (one order lower)
    int jet_order = 0;

    int m() const { return static_cast<int>(focal_curvatures.size()); }
};

// Codimension-k affine subspace swept by centers of spheres with high-order
// contact. k = 1 is the normal hyperplane, k = m+1 the hypersphere center.
struct FocalPlane {
    int codim = 0;
    VecD basepoint;
    MatD directions;  // orthonormal rows; empty for codim m+1
};

// Center of the osculating hypersphere: the unique q with
// <gamma^(k), q> = g^(k) for k = 1..m+1, where g = |gamma|^2 / 2.
// v_arc must be arc normalized with order >= m+1.
VecD focal_center(const VecJet& v_arc, const FrenetData& fr);

// Full per-point focal computation, run in jet arithmetic. Needs v_arc of
// order >= m+2 and fr from frenet_jets with arc_order >= 1.
FocalData focal_data(const VecJet& v_arc, const FrenetData& fr);

// The c_i from the curvature jets alone: c_1 = 1/kappa_1,
// c_{i+1} = (c_i' + c_{i-1} kappa_i) / kappa_{i+1}. Independent of the
// linear solve in focal_data, which makes it a useful cross-check.
std::vector<Jet> focal_curvatures_recursive(const FrenetData& fr);

// The flag A^1 > A^2 > ... > A^{m+1}, one entry per codimension.
std::vector<FocalPlane> focal_planes(const VecD& point, const FrenetData& fr, const FocalData& fo);

// One-call bundle: frame and focal data at a parameter value. The default
// jet order covers first derivatives of every derived quantity and the
// recursive focal curvatures.
struct Apparatus {
    double theta = 0.0;
    double speed = 1.0;
    VecD point;      // gamma(theta)
    VecJet arc;      // curve as jets in arc length about the point
    FrenetData frenet;
    bool has_focal = false;  // false at flattenings (center at infinity)
    FocalData focal;
};

int default_jet_order(int m);

Apparatus apparatus_at(const CurveModel& curve, double theta, int order = -1);

struct FocalSample {
    double theta = 0.0;
    double s = 0.0;  // arc length accumulated from the domain start
    bool flattening = false;
    VecD point;
    FrenetData frenet;
    FocalData focal;  // valid iff !flattening
};

std::vector<FocalSample> focal_curve(const CurveModel& curve, int n, int order = -1);

}  // namespace focalis
