#include "focalis/curve.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "focalis/frenet.hpp"

namespace focalis {

namespace {

using detail::Lexer;
using detail::Token;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Accepted component names, by position: x y z w for small dimensions, or
// x1..xk for any dimension.
int component_index(const std::string& name, int dim) {
    static const char* short_names[] = {"x", "y", "z", "w"};
    for (int i = 0; i < 4 && i < dim; ++i)
        if (name == short_names[i]) return i;
    if (name.size() >= 2 && name[0] == 'x') {
        int idx = 0;
        for (size_t i = 1; i < name.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(name[i]))) return -1;
            idx = idx * 10 + (name[i] - '0');
        }
        if (idx >= 1 && idx <= dim) return idx - 1;
    }
    return -1;
}

double const_value(const Expr& e, const Token& where) {
    if (e.depends_on_parameter())
        throw ParseError(where.line, where.col, "expected a constant expression");
    return e.eval(0.0);
}

}  // namespace

VecJet CurveModel::eval_jet(double theta0, int order) const {
    const Jet t = Jet::variable(theta0, order);
    VecJet out;
    out.comp.reserve(components.size());
    for (const Expr& e : components) out.comp.push_back(e.eval(t));
    return out;
}

std::string CurveModel::print() const {
    std::ostringstream os;
    os << "dim " << dimension << ";\n";
    for (int i = 0; i < dimension; ++i)
        os << 'x' << (i + 1) << " = " << components[static_cast<size_t>(i)].print() << ";\n";
    os << "domain [" << fmt(domain_lo) << ", " << fmt(domain_hi) << "];\n";
    if (periodic) os << "periodic;\n";
    if (!label.empty()) os << "label \"" << label << "\";\n";
    return os.str();
}

CurveModel parse_curve(const std::string& source) {
    Lexer lx(source);
    CurveModel model;
    std::vector<bool> seen;
    bool have_dim = false, have_domain = false;

    auto expect_symbol = [&](char c) {
        const Token& t = lx.peek();
        if (t.kind != Token::Kind::Symbol || t.text[0] != c)
            lx.fail(std::string("'") + c + "'");
        lx.next();
    };

    while (lx.peek().kind != Token::Kind::End) {
        const Token head = lx.peek();
        if (head.kind != Token::Kind::Ident) lx.fail("a statement keyword or component name");
        if (head.text == "dim") {
            lx.next();
            const Token num = lx.peek();
            if (num.kind != Token::Kind::Number) lx.fail("a dimension");
            lx.next();
            model.dimension = static_cast<int>(num.number);
            if (model.dimension < 2 || model.dimension != num.number)
                throw DimensionError("curve dimension must be an integer >= 2", ErrorCategory::Parse);
            have_dim = true;
            model.components.assign(static_cast<size_t>(model.dimension), Expr());
            seen.assign(static_cast<size_t>(model.dimension), false);
        } else if (head.text == "domain") {
            lx.next();
            expect_symbol('[');
            const Token lo_tok = lx.peek();
            Expr lo = detail::parse_expression(lx);
            expect_symbol(',');
            const Token hi_tok = lx.peek();
            Expr hi = detail::parse_expression(lx);
            expect_symbol(']');
            model.domain_lo = const_value(lo, lo_tok);
            model.domain_hi = const_value(hi, hi_tok);
            if (!(model.domain_hi > model.domain_lo))
                throw ParseError(hi_tok.line, hi_tok.col, "domain must satisfy lo < hi");
            have_domain = true;
        } else if (head.text == "periodic") {
            lx.next();
            model.periodic = true;
        } else if (head.text == "label") {
            lx.next();
            const Token s = lx.peek();
            if (s.kind != Token::Kind::String) lx.fail("a quoted label");
            lx.next();
            model.label = s.text;
        } else {
            if (!have_dim)
                throw ParseError(head.line, head.col, "dim must come before component definitions");
            const int idx = component_index(head.text, model.dimension);
            if (idx < 0) lx.fail("a component name valid for dim " + std::to_string(model.dimension));
            lx.next();
            expect_symbol('=');
            model.components[static_cast<size_t>(idx)] = detail::parse_expression(lx);
            seen[static_cast<size_t>(idx)] = true;
        }
        // statements are ';' separated; the last separator is optional
        if (lx.peek().kind == Token::Kind::Symbol && lx.peek().text == ";") {
            lx.next();
        } else if (lx.peek().kind != Token::Kind::End) {
            lx.fail("';'");
        }
    }

    if (!have_dim) throw DimensionError("curve file must declare dim", ErrorCategory::Parse);
    for (int i = 0; i < model.dimension; ++i) {
        if (!seen[static_cast<size_t>(i)])
            throw DimensionError("missing component x" + std::to_string(i + 1), ErrorCategory::Parse);
    }
    if (!have_domain) throw ParseError(1, 1, "curve file must declare a domain");

    if (model.periodic) {
        const VecJet a = model.eval_jet(model.domain_lo, 4);
        const VecJet b = model.eval_jet(model.domain_hi, 4);
        for (int i = 0; i < model.dimension; ++i)
            for (int k = 0; k <= 4; ++k)
                if (std::fabs(a[i][k] - b[i][k]) > 1e-9)
                    throw ParseError(1, 1, "curve declared periodic but endpoint jets differ");
    }
    return model;
}

CurveModel parse_curve_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open curve file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_curve(ss.str());
}

namespace {

uint64_t splitmix64(uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double uniform_pm1(uint64_t& state) {
    return 2.0 * ((splitmix64(state) >> 11) * 0x1.0p-53) - 1.0;
}

bool probe_good(const CurveModel& model, bool reject_flattening) {
    const int n = 400;
    const std::vector<double> grid = sample_grid(model, n);
    for (double th : grid) {
        try {
            const GoodnessReport rep = is_good(model.eval_jet(th, model.m() + 1), model.m());
            if (!rep.is_good) return false;
            if (reject_flattening && rep.is_flattening) return false;
        } catch (const Error&) {
            return false;
        }
    }
    // sign changes of kappa_m between probe points are flattenings too
    if (reject_flattening) {
        double prev = 0.0;
        bool have_prev = false;
        for (double th : grid) {
            const ArcNormalized an = arc_normalize(model.eval_jet(th, model.m() + 1));
            const double km = frenet_at(an.curve, model.m()).curvatures.back();
            if (have_prev && prev * km < 0.0) return false;
            prev = km;
            have_prev = true;
        }
    }
    return true;
}

CurveModel random_poly_r4(uint64_t seed) {
    uint64_t state = 0x9E3779B97F4A7C15ull * (seed + 1);
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::ostringstream src;
        src << "dim 4;\n";
        for (int c = 0; c < 4; ++c) {
            src << 'x' << (c + 1) << " = " << fmt(uniform_pm1(state));
            for (int k = 1; k <= 6; ++k)
                src << " + " << fmt(uniform_pm1(state)) << "*t^" << k;
            src << ";\n";
        }
        src << "domain [-1, 1];\n";
        src << "label \"random_poly_r4 seed " << seed << "\";\n";
        CurveModel model = parse_curve(src.str());
        if (probe_good(model, /*reject_flattening=*/true)) return model;
    }
    throw NotGoodCurve("random_poly_r4: no good curve found for this seed");
}

CurveModel random_closed_r3(uint64_t seed) {
    uint64_t state = 0xBF58476D1CE4E5B9ull * (seed + 1);
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::ostringstream src;
        src << "dim 3;\n";
        for (int c = 0; c < 3; ++c) {
            src << 'x' << (c + 1) << " = " << fmt(uniform_pm1(state)) << "*cos(t) + "
                << fmt(uniform_pm1(state)) << "*sin(t)";
            for (int k = 2; k <= 3; ++k) {
                src << " + " << fmt(uniform_pm1(state) / k) << "*cos(" << k << "*t) + "
                    << fmt(uniform_pm1(state) / k) << "*sin(" << k << "*t)";
            }
            src << ";\n";
        }
        src << "domain [0, 2*pi];\nperiodic;\n";
        src << "label \"random_closed_r3 seed " << seed << "\";\n";
        CurveModel model = parse_curve(src.str());
        if (probe_good(model, /*reject_flattening=*/false)) return model;
    }
    throw NotGoodCurve("random_closed_r3: no good curve found for this seed");
}

const std::map<std::string, const char*>& fixed_builtins() {
    static const std::map<std::string, const char*> table = {
        {"unit_circle",
         "dim 2; x = cos(t); y = sin(t); domain [0, 2*pi]; periodic; label \"unit_circle\";"},
        {"ellipse_2_1",
         "dim 2; x = 2*cos(t); y = sin(t); domain [0, 2*pi]; periodic; label \"ellipse_2_1\";"},
        {"helix", "dim 3; x = cos(t); y = sin(t); z = t; domain [0, 2*pi]; label \"helix\";"},
        {"twisted_cubic",
         "dim 3; x = t; y = t^2; z = t^3; domain [-1, 1]; label \"twisted_cubic\";"},
        {"sphere_curve_r3",
         "dim 3; x = cos(0.5*sin(2*t))*cos(t); y = cos(0.5*sin(2*t))*sin(t); "
         "z = sin(0.5*sin(2*t)); domain [0, 2*pi]; periodic; label \"sphere_curve_r3\";"},
        {"sphere_curve_r4",
         "dim 4; x = cos(t); y = sin(t); z = cos(2*t); w = sin(2*t); domain [0, 2*pi]; "
         "periodic; label \"sphere_curve_r4\";"},
        {"trefoil_like",
         "dim 3; x = sin(t) + 2*sin(2*t); y = cos(t) - 2*cos(2*t); z = -sin(3*t); "
         "domain [0, 2*pi]; periodic; label \"trefoil_like\";"},
    };
    return table;
}

}  // namespace

CurveModel builtin(const std::string& name) {
    std::string base = name;
    uint64_t seed = 1;
    if (const size_t colon = name.find(':'); colon != std::string::npos) {
        base = name.substr(0, colon);
        const std::string seed_str = name.substr(colon + 1);
        if (seed_str.empty()) throw UnknownBuiltin(name);
        char* end = nullptr;
        seed = std::strtoull(seed_str.c_str(), &end, 10);
        if (end == nullptr || *end != '\0') throw UnknownBuiltin(name);
    }
    if (base == "random_poly_r4") return random_poly_r4(seed);
    if (base == "random_closed_r3") return random_closed_r3(seed);
    const auto& table = fixed_builtins();
    const auto it = table.find(base);
    if (it == table.end()) throw UnknownBuiltin(name);
    return parse_curve(it->second);
}

std::vector<std::string> builtin_names() {
    std::vector<std::string> names;
    for (const auto& [k, v] : fixed_builtins()) names.push_back(k);
    names.push_back("random_poly_r4");
    names.push_back("random_closed_r3");
    return names;
}

std::vector<double> sample_grid(const CurveModel& curve, int n) {
    std::vector<double> grid;
    grid.reserve(static_cast<size_t>(n));
    if (n == 1) {
        grid.push_back(curve.domain_lo);
        return grid;
    }
    const double span = curve.domain_hi - curve.domain_lo;
    const double step = curve.periodic ? span / n : span / (n - 1);
    for (int i = 0; i < n; ++i) grid.push_back(curve.domain_lo + step * i);
    return grid;
}

}  // namespace focalis
