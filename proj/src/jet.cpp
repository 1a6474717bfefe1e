#include "focalis/jet.hpp"

#include <cmath>
#include <string>

namespace focalis {

int Jet::checked_order(int order) {
    if (order < 0 || order > kMaxOrder) {
        throw InsufficientOrder("jet order " + std::to_string(order) + " outside [0, " +
                                std::to_string(kMaxOrder) + "]");
    }
    return order;
}

Jet Jet::constant(double value, int order) {
    Jet j;
    j.n_ = checked_order(order);
    j.c_[0] = value;
    return j;
}

Jet Jet::variable(double value, int order) {
    Jet j;
    j.n_ = checked_order(order);
    j.c_[0] = value;
    if (j.n_ >= 1) j.c_[1] = 1.0;
    return j;
}

double Jet::derivative(int k) const {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f * (*this)[k];
}

void Jet::set(int k, double v) {
    if (k < 0 || k > n_) throw InsufficientOrder("jet coefficient index out of range");
    c_[static_cast<size_t>(k)] = v;
}

Jet Jet::truncated(int order) const {
    Jet j;
    j.n_ = checked_order(order);
    for (int k = 0; k <= j.n_ && k <= n_; ++k) j.c_[static_cast<size_t>(k)] = c_[static_cast<size_t>(k)];
    return j;
}

Jet Jet::operator-() const {
    Jet j = *this;
    for (int k = 0; k <= n_; ++k) j.c_[static_cast<size_t>(k)] = -j.c_[static_cast<size_t>(k)];
    return j;
}

Jet& Jet::operator+=(const Jet& o) {
    *this = *this + o;
    return *this;
}

Jet& Jet::operator-=(const Jet& o) {
    *this = *this - o;
    return *this;
}

Jet& Jet::operator*=(double s) {
    for (int k = 0; k <= n_; ++k) c_[static_cast<size_t>(k)] *= s;
    return *this;
}

Jet operator+(const Jet& a, const Jet& b) {
    Jet r;
    r.n_ = std::min(a.n_, b.n_);
    for (int k = 0; k <= r.n_; ++k) r.c_[static_cast<size_t>(k)] = a.c_[static_cast<size_t>(k)] + b.c_[static_cast<size_t>(k)];
    return r;
}

Jet operator-(const Jet& a, const Jet& b) {
    Jet r;
    r.n_ = std::min(a.n_, b.n_);
    for (int k = 0; k <= r.n_; ++k) r.c_[static_cast<size_t>(k)] = a.c_[static_cast<size_t>(k)] - b.c_[static_cast<size_t>(k)];
    return r;
}

Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    r.n_ = std::min(a.n_, b.n_);
    for (int k = 0; k <= r.n_; ++k) {
        double s = 0.0;
        for (int j = 0; j <= k; ++j) s += a.c_[static_cast<size_t>(j)] * b.c_[static_cast<size_t>(k - j)];
        r.c_[static_cast<size_t>(k)] = s;
    }
    return r;
}

Jet operator/(const Jet& a, const Jet& b) {
    if (b.value() == 0.0) throw DivisionByZeroJet();
    Jet r;
    r.n_ = std::min(a.n_, b.n_);
    const double inv = 1.0 / b.c_[0];
    for (int k = 0; k <= r.n_; ++k) {
        double s = a.c_[static_cast<size_t>(k)];
        for (int j = 0; j < k; ++j) s -= r.c_[static_cast<size_t>(j)] * b.c_[static_cast<size_t>(k - j)];
        r.c_[static_cast<size_t>(k)] = s * inv;
    }
    return r;
}

Jet operator+(const Jet& a, double s) {
    Jet r = a;
    r.set(0, r.value() + s);
    return r;
}
Jet operator+(double s, const Jet& a) { return a + s; }
Jet operator-(const Jet& a, double s) { return a + (-s); }
Jet operator-(double s, const Jet& a) { return (-a) + s; }
Jet operator*(const Jet& a, double s) {
    Jet r = a;
    r *= s;
    return r;
}
Jet operator*(double s, const Jet& a) { return a * s; }
Jet operator/(const Jet& a, double s) {
    if (s == 0.0) throw DivisionByZeroJet("jet divided by scalar zero");
    return a * (1.0 / s);
}
Jet operator/(double s, const Jet& a) { return Jet::constant(s, a.order()) / a; }

namespace {

// Recurrences below solve y' = g(a) a' coefficient by coefficient. With
// Taylor-normalized storage, coefficient k of f' is (k+1) f_{k+1}.

void sincos(const Jet& a, Jet& s, Jet& c) {
    const int n = a.order();
    s = Jet::constant(std::sin(a.value()), n);
    c = Jet::constant(std::cos(a.value()), n);
    for (int k = 0; k < n; ++k) {
        double ds = 0.0, dc = 0.0;
        for (int j = 0; j <= k; ++j) {
            const double ap = (j + 1) * a[j + 1];
            ds += ap * c[k - j];
            dc += ap * s[k - j];
        }
        s.set(k + 1, ds / (k + 1));
        c.set(k + 1, -dc / (k + 1));
    }
}

}  // namespace

Jet sin(const Jet& a) {
    Jet s, c;
    sincos(a, s, c);
    return s;
}

Jet cos(const Jet& a) {
    Jet s, c;
    sincos(a, s, c);
    return c;
}

Jet tan(const Jet& a) {
    Jet s, c;
    sincos(a, s, c);
    if (c.value() == 0.0) throw DomainError("tan at a pole");
    return s / c;
}

Jet exp(const Jet& a) {
    const int n = a.order();
    Jet y = Jet::constant(std::exp(a.value()), n);
    for (int k = 0; k < n; ++k) {
        double d = 0.0;
        for (int j = 0; j <= k; ++j) d += (j + 1) * a[j + 1] * y[k - j];
        y.set(k + 1, d / (k + 1));
    }
    return y;
}

Jet log(const Jet& a) {
    if (!(a.value() > 0.0)) throw DomainError("log of non-positive value");
    const int n = a.order();
    // a y' = a', coefficient k of both sides
    Jet y = Jet::constant(std::log(a.value()), n);
    for (int k = 0; k < n; ++k) {
        double d = (k + 1) * a[k + 1];
        for (int j = 1; j <= k; ++j) d -= a[j] * (k + 1 - j) * y[k + 1 - j];
        y.set(k + 1, d / ((k + 1) * a.value()));
    }
    return y;
}

Jet sqrt(const Jet& a) {
    if (!(a.value() > 0.0)) throw DomainError("sqrt of non-positive value");
    const int n = a.order();
    Jet y = Jet::constant(std::sqrt(a.value()), n);
    // y*y = a gives 2 y0 y_k = a_k - sum_{j=1..k-1} y_j y_{k-j}
    for (int k = 1; k <= n; ++k) {
        double s = a[k];
        for (int j = 1; j < k; ++j) s -= y[j] * y[k - j];
        y.set(k, s / (2.0 * y.value()));
    }
    return y;
}

Jet atan(const Jet& a) {
    const int n = a.order();
    const Jet w = a * a + 1.0;  // (1 + a^2) y' = a'
    Jet y = Jet::constant(std::atan(a.value()), n);
    for (int k = 0; k < n; ++k) {
        double d = (k + 1) * a[k + 1];
        for (int j = 1; j <= k; ++j) d -= w[j] * (k + 1 - j) * y[k + 1 - j];
        y.set(k + 1, d / ((k + 1) * w.value()));
    }
    return y;
}

Jet powi(const Jet& a, long long p) {
    if (p == 0) return Jet::constant(1.0, a.order());
    if (p < 0) {
        if (a.value() == 0.0) throw DomainError("negative power of zero");
        return powi(Jet::constant(1.0, a.order()) / a, -p);
    }
    // binary exponentiation
    Jet base = a;
    Jet acc = Jet::constant(1.0, a.order());
    long long e = p;
    while (e > 0) {
        if (e & 1) acc = acc * base;
        e >>= 1;
        if (e > 0) base = base * base;
    }
    return acc;
}

Jet pow(const Jet& a, double p) {
    if (p == std::floor(p) && std::fabs(p) <= 64.0) return powi(a, static_cast<long long>(p));
    if (!(a.value() > 0.0)) throw DomainError("non-integer power of non-positive base");
    const int n = a.order();
    // a y' = p a' y
    Jet y = Jet::constant(std::pow(a.value(), p), n);
    for (int k = 1; k <= n; ++k) {
        double s = 0.0;
        for (int j = 1; j <= k; ++j) s += ((p + 1.0) * j - k) * a[j] * y[k - j];
        y.set(k, s / (k * a.value()));
    }
    return y;
}

Jet derive(const Jet& a) {
    const int n = a.order();
    if (n == 0) return Jet::constant(0.0, 0);
    Jet r = Jet::constant(0.0, n - 1);
    for (int k = 0; k < n; ++k) r.set(k, (k + 1) * a[k + 1]);
    return r;
}

Jet integrate(const Jet& a, double constant_term) {
    const int n = std::min(a.order() + 1, static_cast<int>(Jet::kMaxOrder));
    Jet r = Jet::constant(constant_term, n);
    for (int k = 1; k <= n; ++k) r.set(k, a[k - 1] / k);
    return r;
}

Jet compose(const Jet& outer, const Jet& inner) {
    if (inner.value() != 0.0) throw CompositionOffsetError();
    const int n = std::min(outer.order(), inner.order());
    // Horner evaluation of the outer polynomial at the inner jet
    Jet r = Jet::constant(outer[n], n);
    for (int k = n - 1; k >= 0; --k) r = r * inner + outer[k];
    return r;
}

Jet revert(const Jet& a) {
    if (a.value() != 0.0) throw NotInvertibleJet("jet reversion requires zero constant term");
    if (a[1] == 0.0) throw NotInvertibleJet();
    const int n = a.order();
    Jet b = Jet::constant(0.0, n);
    if (n >= 1) b.set(1, 1.0 / a[1]);
    // Coefficient k of compose(a, b) is linear in b_k with factor a_1, so each
    // order is fixed by one correction.
    for (int k = 2; k <= n; ++k) {
        const Jet c = compose(a, b);
        b.set(k, b[k] - c[k] / a[1]);
    }
    return b;
}

}  // namespace focalis
