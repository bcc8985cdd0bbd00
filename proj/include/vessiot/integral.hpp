#ifndef VESSIOT_INTEGRAL_HPP
#define VESSIOT_INTEGRAL_HPP

#include "linalg.hpp"
#include "system.hpp"

namespace vessiot {

struct IntegralCheck {
    bool integral = false;          // all pulled-back contact forms and their
                                    // exterior derivatives vanish on the span
    bool transversal = false;       // no nonzero vertical (top-order) vector in the span
    std::optional<bool> witness;    // contact-map criterion, transversal frames only
    std::string note;
};

/* Pointwise integral-element test.
 *
 * The one-forms are the contact forms w^alpha_mu = du^alpha_mu -
 * u^alpha_{mu+1_i} dx^i for |mu| < q; their exterior derivatives are
 * dx^i ^ du^alpha_{mu+1_i}.  Both are evaluated directly on the frame
 * vectors, so no exterior-algebra machinery is needed.  For transversal
 * frames the result is cross-checked through the contact map: the span is
 * integral iff some point of the prolonged equation above the base point
 * reproduces it.  The global hypothesis behind that criterion (the equation
 * equals its first projection) is not verified here; a disagreement between
 * the two routes is reported in the note.
 */
inline IntegralCheck is_integral_element(const PointFrame& frame, const ImplicitSystem& sys) {
    const ChartPtr& chart = sys.chart();
    const int n = chart->n(), m = chart->m(), q = sys.order();
    IntegralCheck out;

    if (!sys.contains(frame.base)) throw ExprError("is_integral_element: base point not on the equation");

    // tangency of every frame vector: dPhi(v) = 0
    for (const Expr& phi : sys.equations()) {
        for (const TangentVector& v : frame.vectors) {
            Rational s(0);
            for (VarId c : phi.variables()) {
                Rational comp = v.component(c);
                if (comp != 0) s += comp * phi.diff(c).eval_at(frame.base);
            }
            if (s != 0)
                throw ExprError("is_integral_element: frame vector is not tangent to the equation");
        }
    }

    bool one_forms = true;
    for (int ord = 0; ord < q && one_forms; ++ord)
        for (const MultiIndex& mu : multiindices_of_order(n, ord))
            for (int a = 0; a < m; ++a) {
                for (const TangentVector& v : frame.vectors) {
                    Rational s = v.component(chart->jet(a, mu));
                    for (int i = 0; i < n; ++i) {
                        auto it = frame.base.find(chart->jet(a, mu.plus(i)));
                        if (it == frame.base.end())
                            throw ExprError("is_integral_element: point does not fix " +
                                            chart->jet_name(a, mu.plus(i)));
                        s -= it->second * v.component(chart->indep(i));
                    }
                    if (s != 0) one_forms = false;
                }
            }

    bool two_forms = true;
    for (int ord = 0; ord < q && two_forms; ++ord)
        for (const MultiIndex& mu : multiindices_of_order(n, ord))
            for (int a = 0; a < m; ++a)
                for (std::size_t p = 0; p < frame.vectors.size(); ++p)
                    for (std::size_t r = p + 1; r < frame.vectors.size(); ++r) {
                        const TangentVector &v = frame.vectors[p], &w = frame.vectors[r];
                        Rational s(0);
                        for (int i = 0; i < n; ++i) {
                            VarId up = chart->jet(a, mu.plus(i));
                            s += v.component(chart->indep(i)) * w.component(up) -
                                 w.component(chart->indep(i)) * v.component(up);
                        }
                        if (s != 0) two_forms = false;
                    }

    out.integral = one_forms && two_forms;

    // transversality w.r.t. the top-order fibration: components on the
    // coordinates of order < q must be linearly independent
    {
        std::vector<VarId> low;
        for (int i = 0; i < n; ++i) low.push_back(chart->indep(i));
        for (int ord = 0; ord < q; ++ord)
            for (VarId v : chart->jets_of_order(ord)) low.push_back(v);
        std::vector<std::vector<Rational>> mat;
        for (const TangentVector& v : frame.vectors) {
            std::vector<Rational> row;
            for (VarId c : low) row.push_back(v.component(c));
            mat.push_back(std::move(row));
        }
        out.transversal =
            detail::rational_rank(mat) == static_cast<int>(frame.vectors.size());
    }

    // contact-map criterion for frames with independent x-parts
    {
        std::vector<std::vector<Rational>> xmat;
        for (const TangentVector& v : frame.vectors) {
            std::vector<Rational> row;
            for (int i = 0; i < n; ++i) row.push_back(v.component(chart->indep(i)));
            xmat.push_back(std::move(row));
        }
        if (detail::rational_rank(xmat) == static_cast<int>(frame.vectors.size())) {
            // unknowns: all order-(q+1) jets at the candidate witness point
            std::vector<VarId> unknowns;
            for (VarId v : chart->jets_of_order(q + 1)) unknowns.push_back(v);
            auto col_of = [&](VarId v) {
                for (std::size_t k = 0; k < unknowns.size(); ++k)
                    if (unknowns[k] == v) return static_cast<int>(k);
                return -1;
            };
            std::vector<std::vector<Rational>> A;
            std::vector<Rational> b;
            // frame conditions: v[u^a_mu] = sum_i v[x^i] * uhat^a_{mu+1_i}, |mu| = q
            for (const TangentVector& v : frame.vectors)
                for (const MultiIndex& mu : multiindices_of_order(n, q))
                    for (int a = 0; a < m; ++a) {
                        std::vector<Rational> row(unknowns.size(), Rational(0));
                        for (int i = 0; i < n; ++i)
                            row[col_of(chart->jet(a, mu.plus(i)))] += v.component(chart->indep(i));
                        A.push_back(std::move(row));
                        b.push_back(v.component(chart->jet(a, mu)));
                    }
            // prolonged equations at the witness point: D_i Phi = 0, linear in uhat
            for (const Expr& phi : sys.equations())
                for (int i = 0; i < n; ++i) {
                    Expr dphi = formal_derivative(phi, i);
                    std::vector<Rational> row(unknowns.size(), Rational(0));
                    Rational rhs(0);
                    // affine in the unknown top-order jets
                    Expr rest = dphi;
                    for (VarId uv : dphi.variables()) {
                        int c = col_of(uv);
                        if (c < 0) continue;
                        Expr coeff = dphi.diff(uv); // linear occurrence
                        row[c] = coeff.eval_at(frame.base);
                        rest = rest - coeff * Expr::variable(chart, uv);
                    }
                    rhs = -rest.eval_at(frame.base);
                    A.push_back(std::move(row));
                    b.push_back(rhs);
                }
            out.witness = detail::rational_solve(std::move(A), std::move(b)).has_value();
            if (one_forms && *out.witness != out.integral)
                out.note = "contact-map criterion disagrees with the form evaluation; the "
                           "equation is probably a proper subset of its first projection";
        }
    }
    return out;
}

} // namespace vessiot

#endif
