#ifndef VESSIOT_INVOLUTION_HPP
#define VESSIOT_INVOLUTION_HPP

#include "symbol.hpp"

#include <map>

namespace vessiot {

/* Closed-form involution analysis of a first-order system in reduced Cartan
 * normal form.  Every non-multiplicative prolongation D_j Phi^alpha_i (i < j)
 * leaves, after subtracting the admissible multiplicative prolongations, an
 * expression that is affine in the second-order derivatives u^delta_{hk}.
 * The coefficient in front of each u^delta_{hk} together with the first-order
 * remainder (the integrability condition) is computed verbatim; the symbol is
 * involutive iff all coefficients vanish on the equation, and the equation is
 * involutive iff additionally every integrability condition vanishes.
 *
 * All index ranges are set-based: gamma ranges over dependents with
 * (gamma,h) parametric and (gamma,j) principal, delta over parametric pairs.
 * For monotone indices beta^(1) <= ... <= beta^(n) this coincides with the
 * printed interval bounds; non-monotone systems cannot sit in delta-regular
 * coordinates, which the report flags.
 */

struct SecondOrderLabel {
    int delta; // dependent index, 0-based
    int h, k;  // unordered class pair, h <= k, 1-based

    bool operator<(const SecondOrderLabel& o) const {
        return std::tie(delta, h, k) < std::tie(o.delta, o.h, o.k);
    }
    bool operator==(const SecondOrderLabel& o) const {
        return delta == o.delta && h == o.h && k == o.k;
    }
};

struct TripleObstruction {
    int alpha; // 0-based
    int i, j;  // 1-based classes, i < j; both (alpha,i) and (alpha,j) principal
    Expr residue;
    std::map<SecondOrderLabel, Expr> brackets;
};

struct ObstructionReport {
    std::vector<TripleObstruction> triples;
    bool symbol_involutive = true;
    bool equation_involutive = true;
    bool monotone_indices = true; // necessary for delta-regular coordinates
    std::string assumption = "delta-regular coordinates assumed; a failed verdict may also "
                             "indicate non-delta-regular coordinates";
};

namespace detail {

// dPhi/du^gamma_h for the class-h parametric derivative of gamma
inline Expr vertical_partial(const SolvedSystem& sys, const Expr& phi, int gamma, int h) {
    return phi.diff(sys.chart()->jet(gamma, sys.unit_index(h)));
}

// C^(1)_h(phi), restricted to the equation manifold
inline Expr contact_apply(const SolvedSystem& sys, int h, const Expr& phi) {
    return sys.restrict(contact_field(sys.chart(), h - 1, 1).apply(phi));
}

} // namespace detail

// Right side of the prolongation formula: D_j Phi^alpha_i written as
// u^alpha_{ij} - C^(1)_j(phi^alpha_i) - sum_h sum_gamma u^gamma_{hj}
// C^h_gamma(phi^alpha_i), restricted to first-order variables on the
// equation.
inline Expr prolongation_residue(const SolvedSystem& sys, int alpha, int i, int j) {
    if (sys.order() != 1) throw std::logic_error("prolongation_residue: first-order systems only");
    if (!sys.principal1(alpha, i))
        throw std::invalid_argument("prolongation_residue: the pair is not principal");
    const ChartPtr& ch = sys.chart();
    const Expr& phi = sys.phi1(alpha, i);
    MultiIndex mu = sys.unit_index(i).plus(j - 1);
    Expr r = Expr::variable(ch, ch->jet(alpha, mu)) - detail::contact_apply(sys, j, phi);
    for (int h = 1; h <= i; ++h)
        for (int gamma = 0; gamma < sys.m(); ++gamma) {
            if (sys.principal1(gamma, h)) continue;
            Expr c = detail::vertical_partial(sys, phi, gamma, h);
            if (c.is_zero()) continue;
            MultiIndex hj = sys.unit_index(h).plus(j - 1);
            r = r - Expr::variable(ch, ch->jet(gamma, hj)) * sys.restrict(c);
        }
    return r;
}

inline ObstructionReport monster(const SolvedSystem& sys) {
    if (sys.order() != 1) throw std::logic_error("monster: first-order systems only");
    ObstructionReport rep;
    const int n = sys.n(), m = sys.m();

    {
        std::vector<int> b = sys.betas();
        for (int k = 1; k < n; ++k)
            if (b[k] < b[k - 1]) rep.monotone_indices = false;
    }

    // shorthands on restricted data
    auto parametric = [&](int gamma, int h) { return !sys.principal1(gamma, h); };
    auto vp = [&](const Expr& phi, int gamma, int h) {
        return sys.restrict(detail::vertical_partial(sys, phi, gamma, h));
    };

    for (int alpha = 0; alpha < m; ++alpha)
        for (int i = 1; i <= n; ++i) {
            if (!sys.principal1(alpha, i)) continue;
            for (int j = i + 1; j <= n; ++j) {
                if (!sys.principal1(alpha, j)) continue;
                const Expr& phi_i = sys.phi1(alpha, i);
                const Expr& phi_j = sys.phi1(alpha, j);
                TripleObstruction tri{alpha, i, j, Expr(), {}};

                // integrability condition
                Expr res = detail::contact_apply(sys, i, phi_j) - detail::contact_apply(sys, j, phi_i);
                for (int h = 1; h <= i; ++h)
                    for (int g = 0; g < m; ++g) {
                        if (!parametric(g, h) || !sys.principal1(g, j)) continue;
                        Expr c = vp(phi_i, g, h);
                        if (c.is_zero()) continue;
                        res = res - c * detail::contact_apply(sys, h, sys.phi1(g, j));
                    }
                tri.residue = res;

                auto add = [&](int delta, int a, int b, const Expr& e) {
                    if (e.is_zero()) return;
                    SecondOrderLabel key{delta, std::min(a, b), std::max(a, b)};
                    auto it = tri.brackets.find(key);
                    if (it == tri.brackets.end())
                        tri.brackets.emplace(key, e);
                    else
                        it->second = it->second + e;
                };
                // sum over gamma with (gamma,a) parametric and (gamma,j) principal
                // of C^a_gamma(phi_i) * C^b_delta(phi^gamma_j)
                auto cross_sum = [&](int a, int b, int delta) {
                    Expr s = Expr::constant(sys.chart(), Rational(0));
                    for (int g = 0; g < m; ++g) {
                        if (!parametric(g, a) || !sys.principal1(g, j)) continue;
                        Expr c1 = vp(phi_i, g, a);
                        if (c1.is_zero()) continue;
                        Expr c2 = vp(sys.phi1(g, j), delta, b);
                        if (c2.is_zero()) continue;
                        s = s + c1 * c2;
                    }
                    return s;
                };

                // u^delta_{hh}, h < i
                for (int h = 1; h < i; ++h)
                    for (int delta = 0; delta < m; ++delta) {
                        if (!parametric(delta, h)) continue;
                        add(delta, h, h, cross_sum(h, h, delta));
                    }
                // u^delta_{hk}, h < k < i
                for (int h = 1; h < i; ++h)
                    for (int k = h + 1; k < i; ++k)
                        for (int delta = 0; delta < m; ++delta) {
                            if (!parametric(delta, h)) continue;
                            if (sys.principal1(delta, k)) {
                                add(delta, h, k, cross_sum(k, h, delta));
                            } else {
                                add(delta, h, k, cross_sum(h, k, delta) + cross_sum(k, h, delta));
                            }
                        }
                // u^delta_{hi}, h < i
                for (int h = 1; h < i; ++h)
                    for (int delta = 0; delta < m; ++delta) {
                        if (!parametric(delta, h)) continue;
                        Expr e = Expr::constant(sys.chart(), Rational(0)) - vp(phi_j, delta, h) +
                                 cross_sum(i, h, delta);
                        if (!sys.principal1(delta, i)) e = e + cross_sum(h, i, delta);
                        add(delta, h, i, e);
                    }
                // u^delta_{hk}, h < i < k < j
                for (int h = 1; h < i; ++h)
                    for (int k = i + 1; k < j; ++k)
                        for (int delta = 0; delta < m; ++delta) {
                            if (sys.principal1(delta, k)) continue;
                            add(delta, h, k, cross_sum(h, k, delta));
                        }
                // u^delta_{ik}, i <= k < j
                for (int k = i; k < j; ++k)
                    for (int delta = 0; delta < m; ++delta) {
                        if (sys.principal1(delta, k)) continue;
                        add(delta, i, k,
                            cross_sum(i, k, delta) - vp(phi_j, delta, k));
                    }
                // u^delta_{hj}, h < i
                for (int h = 1; h < i; ++h)
                    for (int delta = 0; delta < m; ++delta) {
                        if (sys.principal1(delta, j)) continue;
                        add(delta, h, j, vp(phi_i, delta, h) + cross_sum(h, j, delta));
                    }
                // u^delta_{ij}
                for (int delta = 0; delta < m; ++delta) {
                    if (sys.principal1(delta, j)) continue;
                    add(delta, i, j,
                        vp(phi_i, delta, i) - vp(phi_j, delta, j) + cross_sum(i, j, delta));
                }

                for (auto it = tri.brackets.begin(); it != tri.brackets.end();)
                    it = it->second.is_zero() ? tri.brackets.erase(it) : std::next(it);
                if (!tri.brackets.empty()) rep.symbol_involutive = false;
                if (!tri.residue.is_zero()) rep.equation_involutive = false;
                rep.triples.push_back(std::move(tri));
            }
        }
    rep.equation_involutive = rep.equation_involutive && rep.symbol_involutive;
    return rep;
}

} // namespace vessiot

#endif
