#pragma once

#include <array>
#include <vector>

#include "focalis/errors.hpp"

namespace focalis {

// Truncated Taylor expansion of a scalar about a point. Coefficient k stores
// f^(k)/k!, which keeps products and compositions well scaled at high order;
// raw derivatives are recovered on demand.
class Jet {
public:
    static constexpr int kMaxOrder = 24;

    Jet() = default;

    static Jet constant(double value, int order);
    // value + h, the expansion of the parameter itself
    static Jet variable(double value, int order);

    int order() const { return n_; }
    double operator[](int k) const { return (k >= 0 && k <= n_) ? c_[k] : 0.0; }
    double value() const { return c_[0]; }
    double derivative(int k) const;  // k! * coefficient k
    void set(int k, double v);

    Jet truncated(int order) const;

    Jet operator-() const;
    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator*=(double s);

private:
    static int checked_order(int order);
    std::array<double, kMaxOrder + 1> c_{};
    int n_ = 0;

    friend Jet operator+(const Jet&, const Jet&);
    friend Jet operator-(const Jet&, const Jet&);
    friend Jet operator*(const Jet&, const Jet&);
    friend Jet operator/(const Jet&, const Jet&);
};

// Mixed-order operands truncate to the smaller order; equal orders are
// preserved exactly.
Jet operator+(const Jet& a, const Jet& b);
Jet operator-(const Jet& a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);

Jet operator+(const Jet& a, double s);
Jet operator+(double s, const Jet& a);
Jet operator-(const Jet& a, double s);
Jet operator-(double s, const Jet& a);
Jet operator*(const Jet& a, double s);
Jet operator*(double s, const Jet& a);
Jet operator/(const Jet& a, double s);
Jet operator/(double s, const Jet& a);

Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet tan(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sqrt(const Jet& a);
Jet atan(const Jet& a);
Jet powi(const Jet& a, long long p);
Jet pow(const Jet& a, double p);

// d/dh drops the order by one; integration raises it (capped at kMaxOrder).
Jet derive(const Jet& a);
Jet integrate(const Jet& a, double constant_term);

// outer(inner(h)); inner must have zero constant term.
Jet compose(const Jet& outer, const Jet& inner);
// Compositional inverse: compose(a, revert(a)) = h. Needs a[0] = 0, a[1] != 0.
Jet revert(const Jet& a);

// A point of a curve in R^{m+1} with its derivatives: one jet per component,
// all sharing the same order.
struct VecJet {
    std::vector<Jet> comp;

    VecJet() = default;
    explicit VecJet(std::vector<Jet> comps) : comp(std::move(comps)) {}

    int dim() const { return static_cast<int>(comp.size()); }
    int order() const { return comp.empty() ? 0 : comp[0].order(); }
    Jet& operator[](int i) { return comp[static_cast<size_t>(i)]; }
    const Jet& operator[](int i) const { return comp[static_cast<size_t>(i)]; }
};

}  // namespace focalis
