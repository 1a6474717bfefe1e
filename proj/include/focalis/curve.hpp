#pragma once

#include <string>
#include <vector>

#include "focalis/expr.hpp"
#include "focalis/jet.hpp"

namespace focalis {

struct CurveModel {
    int dimension = 0;  // ambient dimension m+1
    std::vector<Expr> components;
    double domain_lo = 0.0;
    double domain_hi = 0.0;
    bool periodic = false;
    std::string label;

    int m() const { return dimension - 1; }
    double period() const { return domain_hi - domain_lo; }

    VecJet eval_jet(double theta0, int order) const;
    std::string print() const;  // round-trips through parse_curve
};

CurveModel parse_curve(const std::string& source);
CurveModel parse_curve_file(const std::string& path);

// Built-in fixtures. Seeded generators accept "name:seed" (default seed 1).
CurveModel builtin(const std::string& name);
std::vector<std::string> builtin_names();

// Sampling convention shared by the CLI and the verification suites:
// periodic curves get n points with no duplicated endpoint, open curves get
// n points including both ends.
std::vector<double> sample_grid(const CurveModel& curve, int n);

}  // namespace focalis
