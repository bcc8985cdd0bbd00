#ifndef VESSIOT_CONNECTION_HPP
#define VESSIOT_CONNECTION_HPP

#include "distribution.hpp"

#include <functional>
#include <optional>
#include <set>

namespace vessiot {

/* Step-by-step construction of integral distributions U_i = X_i + zeta_i^k
 * Y_k.  The unknown coefficient vectors are reduced from the start: whenever
 * two components stand for the same second-order derivative (zeta_c^(b,mu)
 * and zeta_c'^(b,mu') with mu + 1_c = mu' + 1_c'), only the representative
 * with the smallest subscript survives.  Column bookkeeping happens through
 * these contraction labels; switching the reduction off reproduces the
 * unreduced matrices for demonstration purposes.
 */

struct ZetaComponent {
    int sub;   // vector subscript, 1-based
    int alpha; // dependent index, 0-based
    MultiIndex mu;

    bool operator<(const ZetaComponent& o) const {
        return std::tie(sub, alpha, mu.counts) < std::tie(o.sub, o.alpha, o.mu.counts);
    }
    bool operator==(const ZetaComponent& o) const {
        return sub == o.sub && alpha == o.alpha && mu == o.mu;
    }
};

class ZetaLayout {
public:
    ZetaLayout(const SolvedSystem& sys, bool contract)
        : sys_(&sys), contract_(contract), y_labels_(sys.parametric_pairs()) {}

    const std::vector<std::pair<int, MultiIndex>>& y_labels() const { return y_labels_; }
    bool contracting() const { return contract_; }

    // second-order derivative labelling the column of zeta_c^(alpha,mu)
    std::pair<int, MultiIndex> contraction_label(const ZetaComponent& z) const {
        return {z.alpha, z.mu.plus(z.sub - 1)};
    }

    // canonical representative of the alias class: smallest subscript c' with
    // mu' + 1_c' equal to the contraction label and (alpha, mu') parametric
    ZetaComponent canonical(const ZetaComponent& z) const {
        if (!contract_) return z;
        MultiIndex lab = z.mu.plus(z.sub - 1);
        for (int c = 1; c <= sys_->n(); ++c) {
            if (lab.counts[c - 1] == 0) continue;
            MultiIndex mu = lab.minus(c - 1);
            if (!sys_->is_principal(z.alpha, mu)) return {c, z.alpha, mu};
        }
        return z; // unreachable: z itself qualifies
    }
    bool is_canonical(const ZetaComponent& z) const { return canonical(z) == z; }

    VarId symbol(const ZetaComponent& z) const {
        return sys_->chart()->zeta(z.sub, z.alpha, z.mu);
    }
    std::string name(const ZetaComponent& z) const { return sys_->chart()->name(symbol(z)); }

private:
    const SolvedSystem* sys_;
    bool contract_;
    std::vector<std::pair<int, MultiIndex>> y_labels_;
};

struct RankCondition {
    int lhs_rank = 0;
    int rhs_rank = 0;
    bool passes = false;
    std::vector<Expr> caveats;
};

struct StepResult {
    int j = 0;
    RankCondition rank_condition;
    RankCondition augmented_condition;
    bool solved = false;
    std::map<ZetaComponent, Expr> assigned; // determined components of zeta_j
    std::vector<ZetaComponent> free_components;
    // failure payload: per offending row, a description and the residual
    std::vector<std::pair<std::string, Expr>> offending;
};

namespace detail {

struct StepMatrices {
    std::vector<ZetaComponent> unknowns;  // canonical components of zeta_j
    std::vector<ZetaComponent> params;    // canonical components, subscript < j
    SymMatrix a;                          // rows x unknowns
    SymMatrix b;                          // rows x params
    std::vector<Expr> c;                  // theta column
    std::vector<std::string> row_names;
};

// Assemble A zeta_j + B params + c = 0 for the step system
//   Xi_i zeta_j - Xi_j zeta_i + Theta_ij = 0,  i = 1..j-1.
inline StepMatrices step_matrices(const SolvedSystem& sys, const StructureData& sd,
                                  const ZetaLayout& layout, int j) {
    const ChartPtr& ch = sys.chart();
    const auto& ylab = layout.y_labels();
    const int r = static_cast<int>(ylab.size());
    const int v = static_cast<int>(sd.vertical_labels.size());

    StepMatrices sm;
    for (int k = 0; k < r; ++k) {
        ZetaComponent z{j, ylab[k].first, ylab[k].second};
        if (layout.is_canonical(z)) sm.unknowns.push_back(z);
    }
    std::map<ZetaComponent, int> pcol;
    auto param_col = [&](const ZetaComponent& z) {
        auto it = pcol.find(z);
        if (it != pcol.end()) return it->second;
        int idx = static_cast<int>(sm.params.size());
        sm.params.push_back(z);
        pcol.emplace(z, idx);
        return idx;
    };
    // reserve parameter columns in a deterministic order: subscripts, then labels
    for (int c = 1; c < j; ++c)
        for (int k = 0; k < r; ++k) {
            ZetaComponent z{c, ylab[k].first, ylab[k].second};
            if (layout.is_canonical(z)) param_col(z);
        }

    const int rows = (j - 1) * v;
    sm.a = SymMatrix(ch, rows, static_cast<int>(sm.unknowns.size()));
    std::map<std::pair<int, int>, Expr> bacc; // (row, param col) -> coefficient
    sm.c.assign(rows, Expr::constant(ch, Rational(0)));

    std::map<ZetaComponent, int> ucol;
    for (int k = 0; k < static_cast<int>(sm.unknowns.size()); ++k) ucol[sm.unknowns[k]] = k;

    for (int i = 1; i < j; ++i) {
        const SymMatrix& xi_i = sd.xi[i - 1];
        const SymMatrix& xi_j = sd.xi[j - 1];
        const std::vector<Expr>& th = sd.theta.at({i, j});
        for (int vr = 0; vr < v; ++vr) {
            int row = (i - 1) * v + vr;
            sm.row_names.push_back(
                "pair (" + std::to_string(i) + "," + std::to_string(j) + ") component " +
                ch->jet_name(sd.vertical_labels[vr].first, sd.vertical_labels[vr].second));
            // + Xi_i zeta_j
            for (int k = 0; k < r; ++k) {
                const Expr& e = xi_i.at(vr, k);
                if (e.is_zero()) continue;
                ZetaComponent z{j, ylab[k].first, ylab[k].second};
                ZetaComponent canon = layout.canonical(z);
                if (canon.sub == j) {
                    sm.a.set(row, ucol.at(canon), sm.a.at(row, ucol.at(canon)) + e);
                } else {
                    int pc = param_col(canon);
                    auto key = std::make_pair(row, pc);
                    auto it = bacc.find(key);
                    if (it == bacc.end())
                        bacc.emplace(key, e);
                    else
                        it->second = it->second + e;
                }
            }
            // - Xi_j zeta_i
            for (int k = 0; k < r; ++k) {
                const Expr& e = xi_j.at(vr, k);
                if (e.is_zero()) continue;
                ZetaComponent z{i, ylab[k].first, ylab[k].second};
                ZetaComponent canon = layout.canonical(z);
                int pc = param_col(canon);
                auto key = std::make_pair(row, pc);
                auto it = bacc.find(key);
                if (it == bacc.end())
                    bacc.emplace(key, Expr::constant(ch, Rational(0)) - e);
                else
                    it->second = it->second - e;
            }
            // + Theta_ij
            sm.c[row] = th[vr];
        }
    }
    sm.b = SymMatrix(ch, rows, static_cast<int>(sm.params.size()));
    for (auto& [key, e] : bacc) sm.b.set(key.first, key.second, e);
    for (int k = 0; k < static_cast<int>(sm.unknowns.size()); ++k)
        sm.a.set_col_label(k, "zeta_" + std::to_string(j) + "[" +
                                  ch->jet_name(sm.unknowns[k].alpha, sm.unknowns[k].mu) + "]");
    for (int k = 0; k < static_cast<int>(sm.params.size()); ++k)
        sm.b.set_col_label(k, "zeta_" + std::to_string(sm.params[k].sub) + "[" +
                                  ch->jet_name(sm.params[k].alpha, sm.params[k].mu) + "]");
    return sm;
}

} // namespace detail

// Contract labelled columns: columns sharing a label are summed into the
// leftmost occurrence, the others are dropped.
inline SymMatrix contract_columns(const SymMatrix& m, const std::vector<std::string>& labels) {
    if (static_cast<int>(labels.size()) != m.cols())
        throw std::invalid_argument("contract_columns: label count mismatch");
    std::vector<int> target(m.cols(), -1);
    std::map<std::string, int> first;
    std::vector<int> keep;
    for (int c = 0; c < m.cols(); ++c) {
        auto it = first.find(labels[c]);
        if (it == first.end()) {
            first.emplace(labels[c], c);
            target[c] = c;
            keep.push_back(c);
        } else
            target[c] = it->second;
    }
    SymMatrix out(m.chart(), m.rows(), static_cast<int>(keep.size()));
    std::map<int, int> pos;
    for (int k = 0; k < static_cast<int>(keep.size()); ++k) {
        pos[keep[k]] = k;
        out.set_col_label(k, labels[keep[k]]);
    }
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) {
            int t = pos.at(target[c]);
            Expr cur = out.at(r, t);
            out.set(r, t, cur + m.at(r, c));
        }
    return out;
}

struct ConnectionOptions {
    bool contract = true; // reduced ansatz (switching off demonstrates why it is needed)
    int step_limit = 0;   // 0 = all steps
};

struct ConnectionFamily {
    bool success = false;
    int failed_step = -1;
    std::vector<StepResult> steps;
    VessiotBasis basis;
    StructureData structure;
    std::vector<std::pair<int, MultiIndex>> y_labels;
    // every zeta component (subscript, label) resolved to an expression in
    // the free components' symbols
    std::map<ZetaComponent, Expr> zeta;
    std::vector<ZetaComponent> free_components;
    std::vector<VectorField> u_fields;
    bool algebraic_verified = false; // G == 0 after substitution
};

namespace detail {

inline RankCondition make_rank_condition(const SymMatrix& a, const SymMatrix& b,
                                         const std::vector<Expr>* theta, std::mt19937_64& rng) {
    RankCondition rc;
    RankResult ra = rank_generic(a, rng);
    SymMatrix ab = SymMatrix::hcat(a, b);
    if (theta) {
        SymMatrix th(a.chart(), a.rows(), 1);
        for (int r = 0; r < a.rows(); ++r)
            th.set(r, 0, Expr::constant(a.chart(), Rational(0)) - (*theta)[r]);
        ab = SymMatrix::hcat(ab, th);
    }
    RankResult rb = rank_generic(ab, rng);
    rc.lhs_rank = ra.rank;
    rc.rhs_rank = rb.rank;
    rc.passes = ra.rank == rb.rank;
    rc.caveats = ra.caveats;
    for (const Expr& e : rb.caveats) rc.caveats.push_back(e);
    return rc;
}

} // namespace detail

inline StepResult run_step(const SolvedSystem& sys, const StructureData& sd,
                           const ZetaLayout& layout, int j, std::mt19937_64& rng,
                           bool solve = true) {
    StepResult res;
    res.j = j;
    detail::StepMatrices sm = detail::step_matrices(sys, sd, layout, j);
    res.rank_condition = detail::make_rank_condition(sm.a, sm.b, nullptr, rng);
    res.augmented_condition = detail::make_rank_condition(sm.a, sm.b, &sm.c, rng);

    if (!solve) return res;

    const ChartPtr& ch = sys.chart();
    // right side in terms of the parameter symbols: A z = -(B p + c)
    std::vector<Expr> rhs;
    for (int r = 0; r < sm.a.rows(); ++r) {
        Expr e = Expr::constant(ch, Rational(0)) - sm.c[r];
        for (int p = 0; p < static_cast<int>(sm.params.size()); ++p) {
            const Expr& coeff = sm.b.at(r, p);
            if (!coeff.is_zero())
                e = e - coeff * Expr::variable(ch, layout.symbol(sm.params[p]));
        }
        rhs.push_back(std::move(e));
    }
    std::vector<Expr> stand_ins;
    for (const ZetaComponent& z : sm.unknowns)
        stand_ins.push_back(Expr::variable(ch, layout.symbol(z)));
    AffineSolution sol = solve_affine(sm.a, rhs, stand_ins);
    if (!sol.consistent) {
        res.solved = false;
        res.offending.emplace_back(sm.row_names.at(sol.offending_row), sol.residual);
        return res;
    }
    res.solved = true;
    for (auto& [col, value] : sol.assigned) res.assigned.emplace(sm.unknowns[col], value);
    for (int col : sol.free_columns) res.free_components.push_back(sm.unknowns[col]);
    return res;
}

inline RankCondition rank_condition(const SolvedSystem& sys, int j, std::mt19937_64& rng,
                                    bool contract = true) {
    StructureData sd = structure_data(sys);
    ZetaLayout layout(sys, contract);
    return run_step(sys, sd, layout, j, rng, false).rank_condition;
}

inline RankCondition augmented_rank_condition(const SolvedSystem& sys, int j, std::mt19937_64& rng,
                                              bool contract = true) {
    StructureData sd = structure_data(sys);
    ZetaLayout layout(sys, contract);
    return run_step(sys, sd, layout, j, rng, false).augmented_condition;
}

inline StepResult step_solve(const SolvedSystem& sys, int j, std::mt19937_64& rng,
                             bool contract = true) {
    StructureData sd = structure_data(sys);
    ZetaLayout layout(sys, contract);
    return run_step(sys, sd, layout, j, rng, true);
}

inline ConnectionFamily build_family(const SolvedSystem& sys, std::mt19937_64& rng,
                                     ConnectionOptions opt = {}) {
    ConnectionFamily fam;
    fam.basis = vessiot_basis(sys);
    fam.structure = structure_data(sys);
    ZetaLayout layout(sys, opt.contract);
    fam.y_labels = layout.y_labels();
    const ChartPtr& ch = sys.chart();
    const int n = sys.n();
    const int last = opt.step_limit > 0 ? std::min(n, opt.step_limit) : n;

    // subscript-1 components are untouched by every step
    std::map<ZetaComponent, Expr> assigned;
    for (int j = 2; j <= last; ++j) {
        StepResult st = run_step(sys, fam.structure, layout, j, rng, true);
        bool ok = st.rank_condition.passes && st.augmented_condition.passes && st.solved;
        fam.steps.push_back(st);
        if (!ok) {
            fam.failed_step = j;
            fam.success = false;
            return fam;
        }
        for (auto& [z, e] : fam.steps.back().assigned) assigned[z] = e;
    }
    fam.success = true;

    // resolve every component to an expression in the free symbols
    std::function<Expr(const ZetaComponent&)> resolve = [&](const ZetaComponent& z) -> Expr {
        ZetaComponent canon = layout.canonical(z);
        auto it = assigned.find(canon);
        Expr raw = it != assigned.end() ? it->second : Expr::variable(ch, layout.symbol(canon));
        // substitute any non-free symbols occurring inside (subscripts < z.sub)
        std::map<VarId, Expr> sub;
        for (VarId v : raw.variables()) {
            const VarInfo& vi = ch->info(v);
            if (vi.kind != VarKind::Zeta) continue;
            ZetaComponent inner{vi.zsub, vi.alpha, vi.mu};
            ZetaComponent ic = layout.canonical(inner);
            bool free_sym = assigned.find(ic) == assigned.end();
            if (free_sym && ic == inner) continue;
            sub[v] = resolve(inner);
        }
        return sub.empty() ? raw : raw.specialize_zeta(sub);
    };
    for (int c = 1; c <= n; ++c)
        for (auto& [alpha, mu] : fam.y_labels) {
            ZetaComponent z{c, alpha, mu};
            fam.zeta.emplace(z, resolve(z));
            ZetaComponent canon = layout.canonical(z);
            if (canon == z && assigned.find(z) == assigned.end() && c <= last)
                fam.free_components.push_back(z);
        }

    // assemble the fields and verify the algebraic conditions G = 0
    fam.algebraic_verified = true;
    for (int i = 1; i <= n; ++i) {
        VectorField u = fam.basis.x_fields[i - 1];
        for (std::size_t k = 0; k < fam.y_labels.size(); ++k) {
            ZetaComponent z{i, fam.y_labels[k].first, fam.y_labels[k].second};
            Expr zv = fam.zeta.at(z);
            if (!zv.is_zero()) u = u + fam.basis.y_fields[k].scaled(zv);
        }
        fam.u_fields.push_back(std::move(u));
    }
    if (last == n) {
        for (int i = 1; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j) {
                const std::vector<Expr>& th = fam.structure.theta.at({i, j});
                for (std::size_t vr = 0; vr < fam.structure.vertical_labels.size(); ++vr) {
                    Expr g = th[vr];
                    for (std::size_t k = 0; k < fam.y_labels.size(); ++k) {
                        ZetaComponent zi{i, fam.y_labels[k].first, fam.y_labels[k].second};
                        ZetaComponent zj{j, fam.y_labels[k].first, fam.y_labels[k].second};
                        g = g - fam.structure.xi[j - 1].at(static_cast<int>(vr), static_cast<int>(k)) *
                                    fam.zeta.at(zi);
                        g = g + fam.structure.xi[i - 1].at(static_cast<int>(vr), static_cast<int>(k)) *
                                    fam.zeta.at(zj);
                    }
                    if (!g.is_zero()) fam.algebraic_verified = false;
                }
            }
    }
    return fam;
}

/* Differential part of the construction: H^p_{ij} = U_i(zeta_j^p) -
 * U_j(zeta_i^p) = 0, emitted in solved form with the class-j leader
 * d(zeta_i^p)/dx^j on the left.
 */
struct DifferentialCondition {
    int i = 0, j = 0;              // pair i < j; the equation has class j
    std::pair<int, MultiIndex> p;  // symbol-field label
    VarId leader = 0;              // d(zeta_i^p)/dx^j
    Expr rhs;                      // leader = rhs
};

namespace detail {

// U_i with raw symbol coefficients: X_i + sum_k zeta_i^k Y_k
inline VectorField raw_u_field(const ConnectionFamily& fam, const ChartPtr& ch, int i) {
    VectorField u = fam.basis.x_fields[i - 1];
    for (std::size_t k = 0; k < fam.y_labels.size(); ++k) {
        VarId z = ch->zeta(i, fam.y_labels[k].first, fam.y_labels[k].second);
        u = u + fam.basis.y_fields[k].scaled(Expr::variable(ch, z));
    }
    return u;
}

} // namespace detail

inline std::vector<DifferentialCondition> differential_conditions(const SolvedSystem& sys,
                                                                  const ConnectionFamily& fam) {
    const ChartPtr& ch = sys.chart();
    std::vector<DifferentialCondition> out;
    std::vector<VectorField> u;
    for (int i = 1; i <= sys.n(); ++i) u.push_back(detail::raw_u_field(fam, ch, i));
    for (int i = 1; i <= sys.n(); ++i)
        for (int j = i + 1; j <= sys.n(); ++j)
            for (auto& [alpha, mu] : fam.y_labels) {
                VarId zi = ch->zeta(i, alpha, mu), zj = ch->zeta(j, alpha, mu);
                Expr h = u[i - 1].apply(Expr::variable(ch, zj)) -
                         u[j - 1].apply(Expr::variable(ch, zi));
                DifferentialCondition dc;
                dc.i = i;
                dc.j = j;
                dc.p = {alpha, mu};
                dc.leader = ch->zeta_diff(zi, ch->indep(j - 1));
                dc.rhs = h + Expr::variable(ch, dc.leader); // h carries -leader
                out.push_back(std::move(dc));
            }
    return out;
}

struct ReducedDifferentialSystem {
    std::vector<DifferentialCondition> equations; // surviving, leaders normalized away from rhs
    std::vector<std::pair<VarId, std::string>> renumbering; // free symbol -> compact name
    std::vector<std::pair<std::string, Expr>> new_algebraic; // dropped rows that did not vanish
    bool solved_form_ok = true; // every equation of class >= 2, leaders pairwise distinct
};

/* Substitute the identifications and the affine relations into the
 * differential conditions.  Equations whose leader was eliminated must reduce
 * to zero modulo the surviving equations; a nonzero remainder after one full
 * normalization pass is reported as a new algebraic condition.
 */
inline ReducedDifferentialSystem reduce_differential_conditions(const SolvedSystem& sys,
                                                                const ConnectionFamily& fam) {
    const ChartPtr& ch = sys.chart();
    ReducedDifferentialSystem out;
    if (!fam.success) return out;

    // relation map for every non-free component symbol
    std::set<VarId> free_syms;
    for (const ZetaComponent& z : fam.free_components)
        free_syms.insert(ch->zeta(z.sub, z.alpha, z.mu));
    std::map<VarId, Expr> relations;
    for (auto& [z, value] : fam.zeta) {
        VarId sym = ch->zeta(z.sub, z.alpha, z.mu);
        if (!free_syms.count(sym)) relations.emplace(sym, value);
    }
    auto flatten = [&](const Expr& e) { return e.specialize_zeta(relations); };

    // solved-form right sides for the surviving equations, memoized by leader
    std::map<VarId, Expr> solved;       // leader -> normalized rhs
    std::set<VarId> in_progress;
    std::function<Expr(Expr)> normalize = [&](Expr e) -> Expr {
        for (int guard = 0; guard < 256; ++guard) {
            VarId found = 0;
            int fi = 0, fj = 0;
            std::pair<int, MultiIndex> fp;
            for (VarId v : e.variables()) {
                const VarInfo& vi = ch->info(v);
                if (vi.kind != VarKind::ZetaDiff || vi.dcoords.size() != 1) continue;
                const VarInfo& cv = ch->info(vi.dcoords[0]);
                if (cv.kind != VarKind::Indep) continue;
                const VarInfo& bz = ch->info(vi.base);
                if (!free_syms.count(vi.base)) continue;
                if (cv.i + 1 <= bz.zsub) continue; // not a leader
                found = v;
                fi = bz.zsub;
                fj = cv.i + 1;
                fp = {bz.alpha, bz.mu};
                break;
            }
            if (!found) return e;
            auto it = solved.find(found);
            Expr repl;
            if (it != solved.end())
                repl = it->second;
            else {
                if (in_progress.count(found))
                    throw std::logic_error("reduce_differential_conditions: circular leaders");
                in_progress.insert(found);
                VarId zi = ch->zeta(fi, fp.first, fp.second);
                VarId zj = ch->zeta(fj, fp.first, fp.second);
                Expr h = fam.u_fields[fi - 1].apply(flatten(Expr::variable(ch, zj))) -
                         fam.u_fields[fj - 1].apply(Expr::variable(ch, zi));
                Expr rhs = h + Expr::variable(ch, found);
                repl = normalize(rhs);
                solved.emplace(found, repl);
                in_progress.erase(found);
            }
            e = e.substitute({{found, repl}});
        }
        throw std::logic_error("reduce_differential_conditions: normalization did not terminate");
    };

    for (int i = 1; i <= sys.n(); ++i)
        for (int j = i + 1; j <= sys.n(); ++j)
            for (auto& [alpha, mu] : fam.y_labels) {
                VarId zi = ch->zeta(i, alpha, mu), zj = ch->zeta(j, alpha, mu);
                if (free_syms.count(zi)) {
                    DifferentialCondition dc;
                    dc.i = i;
                    dc.j = j;
                    dc.p = {alpha, mu};
                    dc.leader = ch->zeta_diff(zi, ch->indep(j - 1));
                    Expr h = fam.u_fields[i - 1].apply(flatten(Expr::variable(ch, zj))) -
                             fam.u_fields[j - 1].apply(Expr::variable(ch, zi));
                    dc.rhs = normalize(h + Expr::variable(ch, dc.leader));
                    solved.emplace(dc.leader, dc.rhs);
                    out.equations.push_back(std::move(dc));
                } else {
                    // the leader was eliminated; the equation must follow from
                    // the surviving ones and the algebraic relations
                    Expr e = fam.u_fields[i - 1].apply(flatten(Expr::variable(ch, zj))) -
                             fam.u_fields[j - 1].apply(flatten(Expr::variable(ch, zi)));
                    Expr residual = normalize(e);
                    if (!residual.is_zero())
                        out.new_algebraic.emplace_back(
                            "pair (" + std::to_string(i) + "," + std::to_string(j) + ") of " +
                                ch->name(ch->zeta(i, alpha, mu)),
                            residual);
                }
            }

    // compact names for the surviving unknowns, in subscript/label order
    int counter = 0;
    for (const ZetaComponent& z : fam.free_components)
        out.renumbering.emplace_back(ch->zeta(z.sub, z.alpha, z.mu),
                                     "zeta^" + std::to_string(++counter));

    std::set<VarId> leaders;
    for (auto& dc : out.equations) {
        if (dc.j < 2) out.solved_form_ok = false;
        if (!leaders.insert(dc.leader).second) out.solved_form_ok = false;
        if (dc.rhs.depends_on(dc.leader)) out.solved_form_ok = false;
    }
    return out;
}

} // namespace vessiot

#endif
