#ifndef VESSIOT_VECTORFIELD_HPP
#define VESSIOT_VECTORFIELD_HPP

#include "expr.hpp"

#include <map>

namespace vessiot {

/* Finite linear combination of coordinate direction fields with Expr
 * coefficients.  Application to an expression is the derivation
 * sum_c coeff_c * d/dc.
 */
class VectorField {
public:
    VectorField() = default;
    explicit VectorField(ChartPtr chart) : chart_(std::move(chart)) {}

    static VectorField direction(ChartPtr chart, VarId c) {
        VectorField f(chart);
        f.set(c, Expr::constant(chart, Rational(1)));
        return f;
    }

    const ChartPtr& chart() const { return chart_; }
    const std::map<VarId, Expr>& components() const { return comps_; }

    Expr component(VarId c) const {
        auto it = comps_.find(c);
        return it == comps_.end() ? Expr::constant(chart_, Rational(0)) : it->second;
    }
    void set(VarId c, Expr e) {
        if (e.is_zero())
            comps_.erase(c);
        else
            comps_[c] = std::move(e);
    }
    bool is_zero() const { return comps_.empty(); }

    Expr apply(const Expr& f) const {
        Expr r = Expr::constant(chart_, Rational(0));
        for (auto& [c, coeff] : comps_) r = r + coeff * f.diff(c);
        return r;
    }

    friend VectorField operator+(const VectorField& a, const VectorField& b) {
        VectorField r = a;
        if (!r.chart_) r.chart_ = b.chart_;
        for (auto& [c, e] : b.comps_) r.set(c, r.component(c) + e);
        return r;
    }
    friend VectorField operator-(const VectorField& a, const VectorField& b) {
        VectorField r = a;
        if (!r.chart_) r.chart_ = b.chart_;
        for (auto& [c, e] : b.comps_) r.set(c, r.component(c) - e);
        return r;
    }
    VectorField scaled(const Expr& s) const {
        VectorField r(chart_);
        for (auto& [c, e] : comps_) r.set(c, s * e);
        return r;
    }

    // Substitute coordinates inside every coefficient.
    VectorField substitute(const std::map<VarId, Expr>& bindings) const {
        VectorField r(chart_);
        for (auto& [c, e] : comps_) r.set(c, e.substitute(bindings));
        return r;
    }

    bool operator==(const VectorField& o) const { return comps_ == o.comps_; }

    std::string str() const {
        if (comps_.empty()) return "0";
        std::string s;
        for (auto& [c, e] : comps_) {
            if (!s.empty()) s += " + ";
            s += "(" + e.str() + ")*d/d(" + chart_->name(c) + ")";
        }
        return s;
    }

private:
    ChartPtr chart_;
    std::map<VarId, Expr> comps_;
};

// [V,W] computed componentwise: [V,W]^c = V(W^c) - W(V^c).
inline VectorField lie_bracket(const VectorField& v, const VectorField& w) {
    VectorField r(v.chart() ? v.chart() : w.chart());
    std::map<VarId, bool> coords;
    for (auto& [c, e] : v.components()) coords[c] = true;
    for (auto& [c, e] : w.components()) coords[c] = true;
    for (auto& [c, unused] : coords) r.set(c, v.apply(w.component(c)) - w.apply(v.component(c)));
    return r;
}

} // namespace vessiot

#endif
