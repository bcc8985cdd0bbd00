#ifndef VESSIOT_EXPR_HPP
#define VESSIOT_EXPR_HPP

#include "chart.hpp"
#include "poly.hpp"

#include <map>
#include <sstream>
#include <string>

namespace vessiot {

struct ExprError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/* Exact expression over a chart: a fraction of multivariate polynomials kept
 * in canonical form at all times.
 *
 * Canonical means: gcd(num, den) = 1, the denominator has coprime integer
 * coefficients with positive leading coefficient, monomials sorted by a fixed
 * total order.  Structural equality of zeta-free expressions therefore
 * decides equality as rational functions, which is what every rank condition
 * below relies on.  Formal unknowns (zeta) and their partials enter as opaque
 * extra variables; they cancel syntactically and are never divided by.
 */
class Expr {
public:
    Expr() : num_(), den_(Rational(1)) {}

    static Expr constant(ChartPtr chart, Rational c) {
        Expr e;
        e.chart_ = std::move(chart);
        e.num_ = Poly(std::move(c));
        e.den_ = Poly(Rational(1));
        return e;
    }
    static Expr variable(ChartPtr chart, VarId v) {
        Expr e;
        e.chart_ = std::move(chart);
        e.num_ = Poly::variable(v);
        e.den_ = Poly(Rational(1));
        return e;
    }
    static Expr from_fraction(ChartPtr chart, Poly num, Poly den) {
        Expr e;
        e.chart_ = std::move(chart);
        e.num_ = std::move(num);
        e.den_ = std::move(den);
        e.canonicalize();
        return e;
    }

    const ChartPtr& chart() const { return chart_; }
    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    Rational constant_value() const {
        if (!is_constant()) throw ExprError("Expr: not a constant");
        return num_.constant_value() / den_.constant_value();
    }
    bool operator==(const Expr& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Expr& o) const { return !(*this == o); }

    friend Expr operator+(const Expr& a, const Expr& b) {
        a.check(b);
        return from_fraction(a.pick(b), a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Expr operator-(const Expr& a, const Expr& b) {
        a.check(b);
        return from_fraction(a.pick(b), a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    Expr operator-() const { return from_fraction(chart_, -num_, den_); }
    friend Expr operator*(const Expr& a, const Expr& b) {
        a.check(b);
        return from_fraction(a.pick(b), a.num_ * b.num_, a.den_ * b.den_);
    }
    friend Expr operator/(const Expr& a, const Expr& b) {
        a.check(b);
        if (b.num_.is_zero()) throw ExprError("division by an expression that normalizes to zero");
        return from_fraction(a.pick(b), a.num_ * b.den_, a.den_ * b.num_);
    }
    Expr pow(int e) const {
        if (e >= 0) return from_fraction(chart_, num_.pow(e), den_.pow(e));
        if (num_.is_zero()) throw ExprError("division by an expression that normalizes to zero");
        return from_fraction(chart_, den_.pow(-e), num_.pow(-e));
    }
    Expr scaled(const Rational& c) const { return from_fraction(chart_, num_.scaled(c), den_); }

    bool depends_on(VarId v) const { return num_.depends_on(v) || den_.depends_on(v); }
    std::vector<VarId> variables() const {
        std::vector<VarId> vs = num_.variables(), ws = den_.variables();
        vs.insert(vs.end(), ws.begin(), ws.end());
        std::sort(vs.begin(), vs.end());
        vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
        return vs;
    }
    bool zeta_free() const {
        for (VarId v : variables()) {
            VarKind k = chart_->info(v).kind;
            if (k == VarKind::Zeta || k == VarKind::ZetaDiff) return false;
        }
        return true;
    }

    // Partial derivative w.r.t. a coordinate (or parameter), all other
    // variables held fixed; zeta variables chain into formal partials.
    Expr diff(VarId c) const {
        Poly dn = poly_diff(num_, c);
        Poly dd = poly_diff(den_, c);
        // (n/d)' = (n'd - nd')/d^2
        return from_fraction(chart_, dn * den_ - num_ * dd, den_ * den_);
    }

    // Simultaneous substitution of coordinates, then renormalization.
    Expr substitute(const std::map<VarId, Expr>& bindings) const {
        for (auto& [v, rep] : bindings) {
            if (rep.depends_on(v))
                throw ExprError("substitute: coordinate '" + chart_->name(v) +
                                "' appears in its own replacement");
        }
        Expr n = subst_poly(num_, bindings);
        Expr d = subst_poly(den_, bindings);
        if (d.num_.is_zero()) throw ExprError("substitute: denominator vanishes identically");
        return n / d;
    }

    Rational eval_at(const std::map<VarId, Rational>& point) const {
        auto value = [&](VarId v) -> Rational {
            VarKind k = chart_->info(v).kind;
            if (k == VarKind::Zeta || k == VarKind::ZetaDiff)
                throw ExprError("eval_at: expression carries formal unknowns");
            auto it = point.find(v);
            if (it == point.end())
                throw ExprError("eval_at: unbound coordinate '" + chart_->name(v) + "'");
            return it->second;
        };
        Rational d = den_.eval(value);
        if (d == 0) throw ExprError("eval_at: denominator vanishes at the point");
        return num_.eval(value) / d;
    }

    // Replace formal unknowns by expressions; their recorded formal partials
    // become genuine derivatives of the replacement.  Unknowns without a
    // binding stay opaque.
    Expr specialize_zeta(const std::map<VarId, Expr>& zeta_values) const {
        std::map<VarId, Expr> full;
        for (VarId v : variables()) {
            const VarInfo& vi = chart_->info(v);
            if (vi.kind == VarKind::Zeta) {
                auto it = zeta_values.find(v);
                if (it != zeta_values.end()) full.emplace(v, it->second);
            } else if (vi.kind == VarKind::ZetaDiff) {
                auto it = zeta_values.find(vi.base);
                if (it == zeta_values.end()) continue;
                Expr d = it->second;
                for (VarId c : vi.dcoords) d = d.diff(c);
                full.emplace(v, d);
            }
        }
        if (full.empty()) return *this;
        Expr n = subst_poly(num_, full);
        Expr d = subst_poly(den_, full);
        if (d.num_.is_zero()) throw ExprError("specialize_zeta: denominator vanishes identically");
        return n / d;
    }

    std::string str() const {
        if (num_.is_zero()) return "0";
        std::string n = poly_str(num_);
        if (den_.is_constant() && den_.constant_value() == 1) return n;
        return "(" + n + ")/(" + poly_str(den_) + ")";
    }

private:
    void check(const Expr& o) const {
        if (chart_ && o.chart_ && chart_ != o.chart_)
            throw ExprError("Expr: operands from different charts");
    }
    ChartPtr pick(const Expr& o) const { return chart_ ? chart_ : o.chart_; }

    void canonicalize() {
        if (den_.is_zero()) throw ExprError("expression denominator normalizes to zero");
        if (num_.is_zero()) {
            den_ = Poly(Rational(1));
            return;
        }
        Poly g = poly_gcd(num_, den_);
        if (!(g.is_constant() && g.constant_value() == 1)) {
            num_ = *Poly::divide_exact(num_, g);
            den_ = *Poly::divide_exact(den_, g);
        }
        // scale so den has coprime integer coefficients, positive leading one
        Rational c = den_.content();
        if (den_.leading().c < 0) c = -c;
        if (c != 1) {
            Rational inv = Rational(1) / c;
            num_ = num_.scaled(inv);
            den_ = den_.scaled(inv);
        }
    }

    Poly poly_diff(const Poly& p, VarId c) const {
        Poly r = p.derivative(c); // direct occurrence
        for (VarId v : p.variables()) {
            if (v == c) continue;
            const VarInfo& vi = chart_->info(v);
            if (vi.kind == VarKind::Zeta || vi.kind == VarKind::ZetaDiff) {
                VarKind ck = chart_->info(c).kind;
                if (ck == VarKind::Param) continue; // unknowns do not depend on parameters
                VarId dv = chart_->zeta_diff(v, c);
                r = r + p.derivative(v) * Poly::variable(dv);
            }
        }
        return r;
    }

    Expr subst_poly(const Poly& p, const std::map<VarId, Expr>& bindings) const {
        Expr acc = Expr::constant(chart_, Rational(0));
        for (auto& t : p.terms()) {
            Expr term = Expr::constant(chart_, t.c);
            for (auto& [v, e] : t.m.vars) {
                auto it = bindings.find(v);
                Expr base = it != bindings.end() ? it->second : Expr::variable(chart_, v);
                term = term * base.pow(e);
            }
            acc = acc + term;
        }
        return acc;
    }

    std::string poly_str(const Poly& p) const {
        if (p.is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto& t : p.terms()) {
            Rational c = t.c;
            if (first) {
                if (c < 0) {
                    os << "-";
                    c = -c;
                }
            } else {
                os << (c < 0 ? " - " : " + ");
                if (c < 0) c = -c;
            }
            first = false;
            bool unit = (c == 1) && !t.m.vars.empty();
            if (!unit) os << rat_str(c);
            bool lead = unit;
            for (auto& [v, e] : t.m.vars) {
                if (!lead) os << "*";
                lead = false;
                // first factor after a bare coefficient still needs '*'
                os << chart_->name(v);
                if (e > 1) os << "^" << e;
            }
        }
        return os.str();
    }

    ChartPtr chart_;
    Poly num_, den_;
};

inline Expr operator*(const Rational& c, const Expr& e) { return e.scaled(c); }

} // namespace vessiot

#endif
