#ifndef VESSIOT_POLY_HPP
#define VESSIOT_POLY_HPP

#include "rational.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace vessiot {

using VarId = std::uint32_t;

/* Sparse multivariate polynomial over Q.
 *
 * Monomials are sparse (VarId, exponent) lists sorted by VarId; terms are
 * kept sorted descending under a graded-lexicographic order, so a Poly value
 * is canonical: two polynomials are equal as functions iff their term lists
 * are identical.  This is the workhorse under Expr; all zero tests reduce to
 * emptiness here.
 */

struct Monomial {
    std::vector<std::pair<VarId, int>> vars; // sorted by VarId, exponents > 0

    int degree() const {
        int d = 0;
        for (auto& [v, e] : vars) d += e;
        return d;
    }
    bool operator==(const Monomial& o) const { return vars == o.vars; }
    int exponent(VarId v) const {
        for (auto& [w, e] : vars)
            if (w == v) return e;
        return 0;
    }
};

// Graded lex: higher total degree first, ties broken lexicographically with
// the smallest VarId weighing most.
inline int mono_cmp(const Monomial& a, const Monomial& b) {
    int da = a.degree(), db = b.degree();
    if (da != db) return da < db ? -1 : 1;
    std::size_t i = 0, j = 0;
    while (i < a.vars.size() && j < b.vars.size()) {
        if (a.vars[i].first != b.vars[j].first) {
            // the one owning the smaller variable has a positive exponent there
            return a.vars[i].first < b.vars[j].first ? 1 : -1;
        }
        if (a.vars[i].second != b.vars[j].second)
            return a.vars[i].second > b.vars[j].second ? 1 : -1;
        ++i, ++j;
    }
    if (i < a.vars.size()) return 1;
    if (j < b.vars.size()) return -1;
    return 0;
}

inline Monomial mono_mul(const Monomial& a, const Monomial& b) {
    Monomial r;
    r.vars.reserve(a.vars.size() + b.vars.size());
    std::size_t i = 0, j = 0;
    while (i < a.vars.size() || j < b.vars.size()) {
        if (j == b.vars.size() || (i < a.vars.size() && a.vars[i].first < b.vars[j].first))
            r.vars.push_back(a.vars[i++]);
        else if (i == a.vars.size() || b.vars[j].first < a.vars[i].first)
            r.vars.push_back(b.vars[j++]);
        else {
            r.vars.emplace_back(a.vars[i].first, a.vars[i].second + b.vars[j].second);
            ++i, ++j;
        }
    }
    return r;
}

// a / b if b divides a, componentwise.
inline std::optional<Monomial> mono_div(const Monomial& a, const Monomial& b) {
    Monomial r;
    std::size_t i = 0;
    for (auto& [v, e] : b.vars) {
        while (i < a.vars.size() && a.vars[i].first < v) r.vars.push_back(a.vars[i++]);
        if (i == a.vars.size() || a.vars[i].first != v || a.vars[i].second < e) return std::nullopt;
        if (a.vars[i].second > e) r.vars.emplace_back(v, a.vars[i].second - e);
        ++i;
    }
    while (i < a.vars.size()) r.vars.push_back(a.vars[i++]);
    return r;
}

class Poly {
public:
    struct Term {
        Monomial m;
        Rational c;
    };

    Poly() = default;
    explicit Poly(Rational c) {
        if (c != 0) terms_.push_back({Monomial{}, std::move(c)});
    }
    static Poly variable(VarId v, int exp = 1) {
        Poly p;
        p.terms_.push_back({Monomial{{{v, exp}}}, Rational(1)});
        return p;
    }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_[0].m.vars.empty());
    }
    Rational constant_value() const { return terms_.empty() ? Rational(0) : terms_[0].c; }
    const std::vector<Term>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    int total_degree() const {
        int d = 0;
        for (auto& t : terms_) d = std::max(d, t.m.degree());
        return d;
    }
    const Term& leading() const { return terms_.front(); } // largest monomial

    bool operator==(const Poly& o) const {
        if (terms_.size() != o.terms_.size()) return false;
        for (std::size_t i = 0; i < terms_.size(); ++i)
            if (!(terms_[i].m == o.terms_[i].m) || terms_[i].c != o.terms_[i].c) return false;
        return true;
    }

    Poly operator-() const {
        Poly r = *this;
        for (auto& t : r.terms_) t.c = -t.c;
        return r;
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        Poly r;
        r.terms_.reserve(a.terms_.size() + b.terms_.size());
        std::size_t i = 0, j = 0;
        while (i < a.terms_.size() || j < b.terms_.size()) {
            if (j == b.terms_.size())
                r.terms_.push_back(a.terms_[i++]);
            else if (i == a.terms_.size())
                r.terms_.push_back(b.terms_[j++]);
            else {
                int c = mono_cmp(a.terms_[i].m, b.terms_[j].m);
                if (c > 0)
                    r.terms_.push_back(a.terms_[i++]);
                else if (c < 0)
                    r.terms_.push_back(b.terms_[j++]);
                else {
                    Rational s = a.terms_[i].c + b.terms_[j].c;
                    if (s != 0) r.terms_.push_back({a.terms_[i].m, std::move(s)});
                    ++i, ++j;
                }
            }
        }
        return r;
    }
    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::map<Monomial, Rational, MonoLess> acc;
        for (auto& ta : a.terms_)
            for (auto& tb : b.terms_) {
                Monomial m = mono_mul(ta.m, tb.m);
                auto [it, fresh] = acc.emplace(std::move(m), Rational(0));
                it->second += ta.c * tb.c;
            }
        Poly r;
        for (auto it = acc.rbegin(); it != acc.rend(); ++it)
            if (it->second != 0) r.terms_.push_back({it->first, it->second});
        return r;
    }

    Poly scaled(const Rational& c) const {
        if (c == 0) return Poly();
        Poly r = *this;
        for (auto& t : r.terms_) t.c *= c;
        return r;
    }

    Poly pow(int e) const {
        if (e < 0) throw std::invalid_argument("Poly::pow: negative exponent");
        Poly r{Rational(1)};
        Poly base = *this;
        while (e) {
            if (e & 1) r = r * base;
            base = base * base;
            e >>= 1;
        }
        return r;
    }

    // Exact division; nullopt when the division leaves a remainder.
    static std::optional<Poly> divide_exact(const Poly& a, const Poly& b) {
        if (b.is_zero()) throw std::invalid_argument("Poly::divide_exact by zero");
        Poly rem = a, quo;
        while (!rem.is_zero()) {
            auto m = mono_div(rem.leading().m, b.leading().m);
            if (!m) return std::nullopt;
            Rational c = rem.leading().c / b.leading().c;
            Poly t;
            t.terms_.push_back({*m, c});
            quo = quo + t;
            rem = rem - t * b;
        }
        return quo;
    }

    std::vector<VarId> variables() const {
        std::vector<VarId> vs;
        for (auto& t : terms_)
            for (auto& [v, e] : t.m.vars) vs.push_back(v);
        std::sort(vs.begin(), vs.end());
        vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
        return vs;
    }
    bool depends_on(VarId v) const {
        for (auto& t : terms_)
            if (t.m.exponent(v) > 0) return true;
        return false;
    }
    int degree_in(VarId v) const {
        int d = 0;
        for (auto& t : terms_) d = std::max(d, t.m.exponent(v));
        return d;
    }

    Poly derivative(VarId v) const {
        Poly r;
        for (auto& t : terms_) {
            int e = t.m.exponent(v);
            if (e == 0) continue;
            Monomial m;
            for (auto& [w, k] : t.m.vars) {
                if (w == v) {
                    if (k > 1) m.vars.emplace_back(w, k - 1);
                } else
                    m.vars.emplace_back(w, k);
            }
            Poly t1;
            t1.terms_.push_back({std::move(m), t.c * e});
            r = r + t1;
        }
        return r;
    }

    // Substitute each variable by a value; total evaluation.
    Rational eval(const std::function<Rational(VarId)>& value) const {
        Rational acc(0);
        for (auto& t : terms_) {
            Rational v = t.c;
            for (auto& [w, e] : t.m.vars) {
                Rational base = value(w);
                for (int k = 0; k < e; ++k) v *= base;
            }
            acc += v;
        }
        return acc;
    }

    // gcd of all coefficients (positive), 0 for the zero polynomial.
    Rational content() const {
        Rational c(0);
        for (auto& t : terms_) c = rat_gcd(c, t.c);
        return c;
    }

    // View as univariate in v: exponent -> coefficient polynomial.
    std::map<int, Poly> univariate_in(VarId v) const {
        std::map<int, Poly> res;
        for (auto& t : terms_) {
            int e = t.m.exponent(v);
            Monomial m;
            for (auto& [w, k] : t.m.vars)
                if (w != v) m.vars.emplace_back(w, k);
            Poly t1;
            t1.terms_.push_back({std::move(m), t.c});
            auto [it, fresh] = res.emplace(e, Poly());
            it->second = it->second + t1;
        }
        for (auto it = res.begin(); it != res.end();)
            it = it->second.is_zero() ? res.erase(it) : std::next(it);
        return res;
    }

    static Poly from_univariate(VarId v, const std::map<int, Poly>& coeffs) {
        Poly r;
        for (auto& [e, c] : coeffs)
            r = r + (e == 0 ? c : c * Poly::variable(v, e));
        return r;
    }

private:
    struct MonoLess {
        bool operator()(const Monomial& a, const Monomial& b) const { return mono_cmp(a, b) < 0; }
    };

    std::vector<Term> terms_;
};

namespace detail {

inline Poly content_in(const Poly& p, VarId v, const std::function<Poly(Poly, Poly)>& gcd);

// gcd of the integer/rational content plus primitive polynomial gcd.
// Primitive PRS; adequate for the small polynomials that arise here.
inline Poly poly_gcd(Poly a, Poly b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.is_constant() || b.is_constant()) return Poly(Rational(1));

    std::function<Poly(Poly, Poly)> rec = [&](Poly x, Poly y) { return poly_gcd(std::move(x), std::move(y)); };

    // main variable: smallest variable appearing in either
    VarId v = std::min(a.variables().front(), b.variables().front());
    if (!a.depends_on(v) || !b.depends_on(v)) {
        // v appears in only one: gcd divides the other's content w.r.t. v
        const Poly& with = a.depends_on(v) ? a : b;
        const Poly& without = a.depends_on(v) ? b : a;
        return poly_gcd(content_in(with, v, rec), without);
    }

    Poly ca = content_in(a, v, rec), cb = content_in(b, v, rec);
    Poly cont = poly_gcd(ca, cb);
    Poly pa = *Poly::divide_exact(a, ca);
    Poly pb = *Poly::divide_exact(b, cb);

    // primitive PRS on pa, pb (univariate in v over the remaining variables)
    while (true) {
        auto ub = pb.univariate_in(v);
        auto ua = pa.univariate_in(v);
        int da = ua.rbegin()->first, db = ub.rbegin()->first;
        if (da < db) {
            std::swap(pa, pb);
            std::swap(da, db);
            std::swap(ua, ub);
        }
        // fraction-free remainder: repeatedly r <- lead_b*r - lc_v(r)*v^(d-db)*pb
        Poly lead_b = ub.rbegin()->second;
        Poly r = pa;
        while (!r.is_zero()) {
            auto ur = r.univariate_in(v);
            int dr = ur.rbegin()->first;
            if (dr < db) break;
            Poly lcr = ur.rbegin()->second;
            Poly shift = dr == db ? Poly(Rational(1)) : Poly::variable(v, dr - db);
            r = r * lead_b - lcr * shift * pb;
        }
        if (r.is_zero()) {
            Poly prim = *Poly::divide_exact(pb, content_in(pb, v, rec));
            Poly g = cont * prim;
            Rational c = g.content();
            g = *Poly::divide_exact(g, Poly(c));
            if (g.leading().c < 0) g = -g;
            return g;
        }
        pa = pb;
        pb = *Poly::divide_exact(r, content_in(r, v, rec));
        if (!pb.depends_on(v) || !pa.depends_on(v)) {
            // v dropped out: the gcd can only be the accumulated content
            return cont;
        }
    }
}

inline Poly content_in(const Poly& p, VarId v, const std::function<Poly(Poly, Poly)>& gcd) {
    Poly c;
    for (auto& [e, coeff] : p.univariate_in(v)) c = gcd(c, coeff);
    if (c.is_zero()) return Poly(Rational(1));
    return c;
}

} // namespace detail

inline Poly poly_gcd(const Poly& a, const Poly& b) {
    Poly g = detail::poly_gcd(a, b);
    if (g.is_zero()) return g;
    Rational c = g.content();
    g = *Poly::divide_exact(g, Poly(c));
    if (g.leading().c < 0) g = -g;
    return g;
}

} // namespace vessiot

#endif
