#ifndef VESSIOT_CONTACT_HPP
#define VESSIOT_CONTACT_HPP

#include "vectorfield.hpp"

namespace vessiot {

/* Contact calculus on the jet bundle: the transversal contact fields, the
 * vertical fields, the formal (total) derivative and the contact map.
 */

// C_i^(q) = d/dx^i + sum_alpha sum_{0 <= |mu| < q} u^alpha_{mu+1_i} d/du^alpha_mu
inline VectorField contact_field(const ChartPtr& chart, int i, int q) {
    if (i < 0 || i >= chart->n()) throw std::out_of_range("contact_field: independent index");
    VectorField f(chart);
    f.set(chart->indep(i), Expr::constant(chart, Rational(1)));
    for (int ord = 0; ord < q; ++ord)
        for (const MultiIndex& mu : multiindices_of_order(chart->n(), ord))
            for (int a = 0; a < chart->m(); ++a)
                f.set(chart->jet(a, mu), Expr::variable(chart, chart->jet(a, mu.plus(i))));
    return f;
}

inline VectorField contact_field(const ChartPtr& chart, int i) {
    return contact_field(chart, i, chart->q());
}

// C^mu_alpha = d/du^alpha_mu with |mu| = q
inline VectorField vertical_field(const ChartPtr& chart, int alpha, const MultiIndex& mu) {
    if (mu.order() != chart->q())
        throw std::invalid_argument("vertical_field: multi-index must have the top order");
    return VectorField::direction(chart, chart->jet(alpha, mu));
}

// Formal derivative D_i f = df/dx^i + sum_{alpha,mu} (df/du^alpha_mu) u^alpha_{mu+1_i}.
// Works on any jet-order expression; raises the order by one where needed.
inline Expr formal_derivative(const Expr& f, int i) {
    const ChartPtr& chart = f.chart();
    Expr r = f.diff(chart->indep(i));
    for (VarId v : f.variables()) {
        const VarInfo& vi = chart->info(v);
        if (vi.kind != VarKind::Jet) continue;
        r = r + f.diff(v) * Expr::variable(chart, chart->jet(vi.alpha, vi.mu.plus(i)));
    }
    return r;
}

/* A tangent vector at a point, held as coordinate components. */
struct TangentVector {
    std::map<VarId, Rational> comp;

    Rational component(VarId v) const {
        auto it = comp.find(v);
        return it == comp.end() ? Rational(0) : it->second;
    }
};

/* Base point plus a list of tangent vectors. */
struct PointFrame {
    std::map<VarId, Rational> base;
    std::vector<TangentVector> vectors;
};

// Coordinate form of the contact map: Gamma_q(rho, d/dx^i) read off a point
// of J_q, landing in T(J_{q-1}).
inline TangentVector contact_map_at(const ChartPtr& chart, const std::map<VarId, Rational>& point,
                                    int i) {
    TangentVector t;
    t.comp[chart->indep(i)] = 1;
    for (int ord = 0; ord < chart->q(); ++ord)
        for (const MultiIndex& mu : multiindices_of_order(chart->n(), ord))
            for (int a = 0; a < chart->m(); ++a) {
                VarId up = chart->jet(a, mu.plus(i));
                auto it = point.find(up);
                if (it == point.end())
                    throw ExprError("contact_map_at: point does not supply " + chart->name(up));
                if (it->second != 0) t.comp[chart->jet(a, mu)] = it->second;
            }
    return t;
}

} // namespace vessiot

#endif
