#ifndef VESSIOT_DISTRIBUTION_HPP
#define VESSIOT_DISTRIBUTION_HPP

#include "involution.hpp"
#include "linalg.hpp"

namespace vessiot {

/* The Vessiot distribution of a solved system, split into the reference
 * complement (one transversal field per independent variable) and the symbol
 * fields (one vertical field per parametric top-order derivative), plus the
 * extended structure coefficients Theta and Xi against the vertical
 * directions of order q-1.
 *
 * Everything lives in the barred chart of the equation: coordinates are x,
 * the jets of order < q and the parametric jets of order q.
 */

struct VessiotBasis {
    std::vector<VectorField> x_fields;               // X_1..X_n
    std::vector<VectorField> y_fields;               // symbol fields
    std::vector<std::pair<int, MultiIndex>> y_labels; // parametric pairs, ranking order
};

// X_i: the contact field with every principal derivative replaced by its
// right side; its vertical part of top order vanishes in the barred chart.
inline std::vector<VectorField> reference_complement(const SolvedSystem& sys) {
    const ChartPtr& ch = sys.chart();
    std::vector<VectorField> out;
    for (int i = 0; i < sys.n(); ++i) {
        VectorField f(ch);
        f.set(ch->indep(i), Expr::constant(ch, Rational(1)));
        for (int ord = 0; ord < sys.order(); ++ord)
            for (VarId v : ch->jets_of_order(ord)) {
                const VarInfo& vi = ch->info(v);
                Expr up = Expr::variable(ch, ch->jet(vi.alpha, vi.mu.plus(i)));
                f.set(v, sys.restrict(up));
            }
        out.push_back(std::move(f));
    }
    return out;
}

inline VessiotBasis vessiot_basis(const SolvedSystem& sys) {
    VessiotBasis b;
    b.x_fields = reference_complement(sys);
    for (auto& [alpha, mu] : sys.parametric_pairs()) {
        b.y_fields.push_back(VectorField::direction(sys.chart(), sys.chart()->jet(alpha, mu)));
        b.y_labels.emplace_back(alpha, mu);
    }
    return b;
}

/* Structure coefficients.  The brackets of the basis fields only hit the
 * vertical directions d/du^alpha_nu with |nu| = q-1; their coefficients are
 * the extended Theta (for [X_i, X_j]) and Xi (for [X_i, Y_k]).
 */
struct StructureData {
    std::vector<std::pair<int, MultiIndex>> vertical_labels; // (alpha, nu), |nu| = q-1
    std::vector<std::pair<int, MultiIndex>> y_labels;
    // theta[(i,j)] with 1 <= i < j <= n: vector over vertical_labels
    std::map<std::pair<int, int>, std::vector<Expr>> theta;
    std::vector<SymMatrix> xi; // per class i: vertical_labels x y_labels
};

namespace detail {

inline std::vector<std::pair<int, MultiIndex>> vertical_labels(const SolvedSystem& sys) {
    std::vector<std::pair<int, MultiIndex>> out;
    for (VarId v : sys.chart()->jets_of_order(sys.order() - 1)) {
        const VarInfo& vi = sys.chart()->info(v);
        out.emplace_back(vi.alpha, vi.mu);
    }
    return out;
}

} // namespace detail

// Closed form of Theta for first-order systems; case selection by principal
// membership of (alpha,i) and (alpha,j).  Entries restricted to the equation.
inline std::vector<Expr> theta(const SolvedSystem& sys, int i, int j) {
    if (i >= j) throw std::invalid_argument("theta: requires i < j");
    if (sys.order() != 1) throw std::logic_error("theta closed form: first-order systems only");
    const ChartPtr& ch = sys.chart();
    std::vector<Expr> out;
    for (int alpha = 0; alpha < sys.m(); ++alpha) {
        bool bi = sys.principal1(alpha, i), bj = sys.principal1(alpha, j);
        Expr v = Expr::constant(ch, Rational(0));
        if (bi && bj)
            v = detail::contact_apply(sys, i, sys.phi1(alpha, j)) -
                detail::contact_apply(sys, j, sys.phi1(alpha, i));
        else if (!bi && bj)
            v = detail::contact_apply(sys, i, sys.phi1(alpha, j));
        else if (bi && !bj)
            v = Expr::constant(ch, Rational(0)) - detail::contact_apply(sys, j, sys.phi1(alpha, i));
        out.push_back(std::move(v));
    }
    return out;
}

// Closed form of Xi_i for first-order systems: rows by alpha, columns by the
// parametric pairs in ranking order.
inline SymMatrix xi(const SolvedSystem& sys, int i) {
    if (sys.order() != 1) throw std::logic_error("xi closed form: first-order systems only");
    const ChartPtr& ch = sys.chart();
    auto cols = sys.parametric_pairs();
    SymMatrix m(ch, sys.m(), static_cast<int>(cols.size()));
    for (int alpha = 0; alpha < sys.m(); ++alpha) {
        m.set_row_label(alpha, ch->uname(alpha));
        for (std::size_t k = 0; k < cols.size(); ++k) {
            auto& [beta, mu] = cols[k];
            int h = mu.cls();
            Expr v;
            if (sys.principal1(alpha, i)) {
                v = Expr::constant(ch, Rational(0)) -
                    sys.restrict(detail::vertical_partial(sys, sys.phi1(alpha, i), beta, h));
            } else {
                bool same = (alpha == beta) && (sys.unit_index(i) == mu);
                v = Expr::constant(ch, Rational(same ? -1 : 0));
            }
            m.set(alpha, static_cast<int>(k), std::move(v));
        }
    }
    for (std::size_t k = 0; k < cols.size(); ++k)
        m.set_col_label(static_cast<int>(k), ch->jet_name(cols[k].first, cols[k].second));
    return m;
}

// Structure coefficients read off the Lie brackets; works for any order and
// is the oracle the closed forms are verified against.
inline std::vector<Expr> theta_bracket(const SolvedSystem& sys, const VessiotBasis& b, int i, int j) {
    VectorField br = lie_bracket(b.x_fields[i - 1], b.x_fields[j - 1]);
    std::vector<Expr> out;
    for (auto& [alpha, nu] : detail::vertical_labels(sys))
        out.push_back(br.component(sys.chart()->jet(alpha, nu)));
    return out;
}

inline SymMatrix xi_bracket(const SolvedSystem& sys, const VessiotBasis& b, int i) {
    auto verts = detail::vertical_labels(sys);
    SymMatrix m(sys.chart(), static_cast<int>(verts.size()), static_cast<int>(b.y_fields.size()));
    for (std::size_t k = 0; k < b.y_fields.size(); ++k) {
        VectorField br = lie_bracket(b.x_fields[i - 1], b.y_fields[k]);
        for (std::size_t r = 0; r < verts.size(); ++r)
            m.set(static_cast<int>(r), static_cast<int>(k),
                  br.component(sys.chart()->jet(verts[r].first, verts[r].second)));
        m.set_col_label(static_cast<int>(k),
                        sys.chart()->jet_name(b.y_labels[k].first, b.y_labels[k].second));
    }
    for (std::size_t r = 0; r < verts.size(); ++r)
        m.set_row_label(static_cast<int>(r),
                        sys.chart()->jet_name(verts[r].first, verts[r].second));
    return m;
}

// Assemble the full structure data.  First-order systems use the closed
// forms; higher order falls back to the brackets.
inline StructureData structure_data(const SolvedSystem& sys) {
    StructureData sd;
    sd.vertical_labels = detail::vertical_labels(sys);
    VessiotBasis b = vessiot_basis(sys);
    sd.y_labels = b.y_labels;
    const int n = sys.n();
    if (sys.order() == 1) {
        for (int i = 1; i <= n; ++i) sd.xi.push_back(xi(sys, i));
        for (int i = 1; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j) sd.theta[{i, j}] = theta(sys, i, j);
    } else {
        for (int i = 1; i <= n; ++i) sd.xi.push_back(xi_bracket(sys, b, i));
        for (int i = 1; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j) sd.theta[{i, j}] = theta_bracket(sys, b, i, j);
    }
    return sd;
}

/* Verify the structure equations: the bracket minus the coefficient
 * combination must lie in the span of the basis fields, and the vertical
 * coefficients must match the closed forms exactly.
 */
struct StructureCheck {
    bool ok = true;
    std::vector<std::string> discrepancies;
};

inline StructureCheck verify_structure_equations(const SolvedSystem& sys) {
    StructureCheck out;
    const ChartPtr& ch = sys.chart();
    VessiotBasis b = vessiot_basis(sys);
    StructureData sd = structure_data(sys);
    auto verts = sd.vertical_labels;

    auto in_span = [&](VectorField rem) {
        // subtract multiples of the X fields (they own the d/dx directions),
        // then of the Y fields (they own the parametric top-order directions);
        // membership holds iff nothing remains
        for (int i = 0; i < sys.n(); ++i) {
            Expr c = rem.component(ch->indep(i));
            if (!c.is_zero()) rem = rem - b.x_fields[i].scaled(c);
        }
        for (std::size_t k = 0; k < b.y_fields.size(); ++k) {
            Expr c = rem.component(ch->jet(b.y_labels[k].first, b.y_labels[k].second));
            if (!c.is_zero()) rem = rem - b.y_fields[k].scaled(c);
        }
        return rem.is_zero();
    };

    for (int i = 1; i <= sys.n(); ++i) {
        for (int j = i + 1; j <= sys.n(); ++j) {
            VectorField br = lie_bracket(b.x_fields[i - 1], b.x_fields[j - 1]);
            const std::vector<Expr>& th = sd.theta.at({i, j});
            for (std::size_t r = 0; r < verts.size(); ++r) {
                VarId v = ch->jet(verts[r].first, verts[r].second);
                if (br.component(v) != th[r]) {
                    out.ok = false;
                    out.discrepancies.push_back("[X_" + std::to_string(i) + ",X_" +
                                                std::to_string(j) + "] vs Theta at " + ch->name(v));
                }
                br.set(v, br.component(v) - th[r]);
            }
            if (!in_span(br)) {
                out.ok = false;
                out.discrepancies.push_back("[X_" + std::to_string(i) + ",X_" + std::to_string(j) +
                                            "] remainder outside the distribution");
            }
        }
        for (std::size_t k = 0; k < b.y_fields.size(); ++k) {
            VectorField br = lie_bracket(b.x_fields[i - 1], b.y_fields[k]);
            for (std::size_t r = 0; r < verts.size(); ++r) {
                VarId v = ch->jet(verts[r].first, verts[r].second);
                const Expr& want = sd.xi[i - 1].at(static_cast<int>(r), static_cast<int>(k));
                if (br.component(v) != want) {
                    out.ok = false;
                    out.discrepancies.push_back("[X_" + std::to_string(i) + ",Y_" +
                                                std::to_string(k + 1) + "] vs Xi at " + ch->name(v));
                }
                br.set(v, br.component(v) - want);
            }
            if (!in_span(br)) {
                out.ok = false;
                out.discrepancies.push_back("[X_" + std::to_string(i) + ",Y_" +
                                            std::to_string(k + 1) +
                                            "] remainder outside the distribution");
            }
        }
    }
    // the symbol fields commute by construction; check anyway
    for (std::size_t k = 0; k < b.y_fields.size(); ++k)
        for (std::size_t l = k + 1; l < b.y_fields.size(); ++l)
            if (!lie_bracket(b.y_fields[k], b.y_fields[l]).is_zero()) {
                out.ok = false;
                out.discrepancies.push_back("[Y,Y] != 0");
            }
    return out;
}

/* Generators of the Vessiot distribution of an implicit system: the nullspace
 * of C_i(Phi) a^i + C^mu_alpha(Phi) b^alpha_mu = 0 over the function field.
 * Vertical columns come first (the symbol part has maximal rank there), so
 * the caveat pivots describe where the vertical solve degenerates.
 */
struct ImplicitGenerators {
    std::vector<VectorField> fields;
    std::vector<Expr> caveats;
};

inline ImplicitGenerators implicit_vessiot_generators(const ImplicitSystem& sys,
                                                      std::mt19937_64& rng) {
    const ChartPtr& ch = sys.chart();
    const int n = ch->n(), q = sys.order();
    std::vector<VarId> vert_asc = ch->jets_of_order(q);
    std::vector<VarId> vert(vert_asc.rbegin(), vert_asc.rend()); // descending ranking

    const int cols = static_cast<int>(vert.size()) + n;
    SymMatrix m(ch, static_cast<int>(sys.equations().size()), cols);
    for (int r = 0; r < static_cast<int>(sys.equations().size()); ++r) {
        const Expr& phi = sys.equations()[r];
        for (std::size_t c = 0; c < vert.size(); ++c) m.set(r, static_cast<int>(c), phi.diff(vert[c]));
        for (int i = 0; i < n; ++i)
            m.set(r, static_cast<int>(vert.size()) + i, contact_field(ch, i, q).apply(phi));
    }
    for (std::size_t c = 0; c < vert.size(); ++c) m.set_col_label(static_cast<int>(c), ch->name(vert[c]));
    for (int i = 0; i < n; ++i)
        m.set_col_label(static_cast<int>(vert.size()) + i, "a^" + ch->xname(i));

    ImplicitGenerators out;
    out.caveats = rank_generic(m, rng).caveats;
    for (auto& vec : nullspace(m)) {
        // sign convention: leading transversal coefficient positive
        for (int i = 0; i < n; ++i) {
            const Expr& a = vec[vert.size() + i];
            if (a.is_zero()) continue;
            if (a.num().leading().c < 0)
                for (Expr& e : vec) e = -e;
            break;
        }
        VectorField f(ch);
        for (int i = 0; i < n; ++i) {
            const Expr& a = vec[vert.size() + i];
            if (a.is_zero()) continue;
            f = f + contact_field(ch, i, q).scaled(a);
        }
        for (std::size_t c = 0; c < vert.size(); ++c)
            if (!vec[c].is_zero()) f.set(vert[c], f.component(vert[c]) + vec[c]);
        out.fields.push_back(std::move(f));
    }
    return out;
}

} // namespace vessiot

#endif
