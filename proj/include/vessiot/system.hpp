#ifndef VESSIOT_SYSTEM_HPP
#define VESSIOT_SYSTEM_HPP

#include "contact.hpp"

#include <optional>
#include <set>

namespace vessiot {

struct Violation {
    int equation; // input index, -1 for system-level
    std::string message;
};

/* First-order (or order-q) system solved for pairwise distinct principal
 * derivatives of order q.  For q = 1 this is the reduced Cartan normal form;
 * validate() enforces its class conditions.
 */
class SolvedSystem {
public:
    struct Equation {
        int alpha;     // dependent index of the principal derivative, 0-based
        MultiIndex mu; // |mu| should equal q
        Expr rhs;
    };

    SolvedSystem(ChartPtr chart, int q) : chart_(std::move(chart)), q_(q) {}

    void add_equation(int alpha, MultiIndex mu, Expr rhs) {
        eqs_.push_back({alpha, std::move(mu), std::move(rhs)});
    }

    const ChartPtr& chart() const { return chart_; }
    int order() const { return q_; }
    int n() const { return chart_->n(); }
    int m() const { return chart_->m(); }
    const std::vector<Equation>& equations() const { return eqs_; }

    bool is_principal(int alpha, const MultiIndex& mu) const {
        for (auto& e : eqs_)
            if (e.alpha == alpha && e.mu == mu) return true;
        return false;
    }
    const Expr& phi(int alpha, const MultiIndex& mu) const {
        for (auto& e : eqs_)
            if (e.alpha == alpha && e.mu == mu) return e.rhs;
        throw std::out_of_range("SolvedSystem::phi: not a principal derivative");
    }
    // q = 1 convenience: phi^alpha_k with k 1-based class
    const Expr& phi1(int alpha, int k) const { return phi(alpha, unit_index(k)); }
    bool principal1(int alpha, int k) const { return is_principal(alpha, unit_index(k)); }
    MultiIndex unit_index(int k) const {
        MultiIndex mu(n());
        mu.counts.at(k - 1) = 1;
        return mu;
    }

    // Principal pairs sorted ascending in the ranking.
    std::vector<std::pair<int, MultiIndex>> principal_pairs() const {
        std::vector<std::pair<int, MultiIndex>> out;
        for (auto& e : eqs_) out.emplace_back(e.alpha, e.mu);
        sort_pairs(out);
        return out;
    }
    // Parametric pairs of order q, ascending in the ranking: these label the
    // symbol fields.
    std::vector<std::pair<int, MultiIndex>> parametric_pairs() const {
        std::vector<std::pair<int, MultiIndex>> out;
        for (const MultiIndex& mu : multiindices_of_order(n(), q_))
            for (int a = 0; a < m(); ++a)
                if (!is_principal(a, mu)) out.emplace_back(a, mu);
        sort_pairs(out);
        return out;
    }

    std::vector<Violation> validate() const {
        std::vector<Violation> v;
        std::set<std::pair<int, std::vector<int>>> seen;
        for (int t = 0; t < static_cast<int>(eqs_.size()); ++t) {
            const Equation& e = eqs_[t];
            if (e.mu.order() == 0 && q_ >= 1) {
                v.push_back({t, "algebraic equation (order 0) for " + chart_->uname(e.alpha) +
                                    ": solve algebraic equations first and eliminate the "
                                    "dependent variable"});
                continue;
            }
            if (e.mu.order() != q_) {
                v.push_back({t, "equation solved for " + chart_->jet_name(e.alpha, e.mu) +
                                    " of order " + std::to_string(e.mu.order()) +
                                    ", expected order " + std::to_string(q_)});
                continue;
            }
            if (!seen.insert({e.alpha, e.mu.counts}).second)
                v.push_back({t, "duplicate principal derivative " + chart_->jet_name(e.alpha, e.mu)});
        }
        for (int t = 0; t < static_cast<int>(eqs_.size()); ++t) {
            const Equation& e = eqs_[t];
            if (e.mu.order() != q_) continue;
            int k = e.mu.cls();
            for (VarId var : e.rhs.variables()) {
                const VarInfo& vi = chart_->info(var);
                if (vi.kind == VarKind::Zeta || vi.kind == VarKind::ZetaDiff) {
                    v.push_back({t, "right side carries a formal unknown"});
                    continue;
                }
                if (vi.kind != VarKind::Jet) continue;
                int ord = vi.mu.order();
                if (ord == 0) continue; // dependent variables are always allowed
                if (ord > q_) {
                    v.push_back({t, "right side depends on " + vi.name + " of order above " +
                                        std::to_string(q_)});
                    continue;
                }
                if (ord == q_ && is_principal(vi.alpha, vi.mu)) {
                    v.push_back({t, "principal derivative " + vi.name + " appears on a right side"});
                    continue;
                }
                if (q_ == 1) {
                    // reduced Cartan normal form: class-k right sides may only
                    // use parametric derivatives of class <= k
                    if (vi.mu.cls() > k)
                        v.push_back({t, "right side of the class-" + std::to_string(k) +
                                            " equation for " + chart_->jet_name(e.alpha, e.mu) +
                                            " depends on the class-" + std::to_string(vi.mu.cls()) +
                                            " derivative " + vi.name});
                }
            }
        }
        return v;
    }

    // beta_q^(k): number of principal pairs of class k, k = 1..n
    std::vector<int> betas() const {
        std::vector<int> b(n(), 0);
        for (auto& e : eqs_)
            if (e.mu.order() >= 1) b[e.mu.cls() - 1]++;
        return b;
    }
    // Cartan characters alpha_1^(k) = m - beta_1^(k) (first order only)
    std::vector<int> alphas() const {
        if (q_ != 1) throw std::logic_error("alphas: defined for first-order systems");
        std::vector<int> a(n(), 0);
        std::vector<int> b = betas();
        for (int k = 0; k < n(); ++k) a[k] = m() - b[k];
        return a;
    }

    std::map<VarId, Expr> principal_substitution() const {
        std::map<VarId, Expr> s;
        for (auto& e : eqs_) s.emplace(chart_->jet(e.alpha, e.mu), e.rhs);
        return s;
    }

    // Pull an expression back to the equation manifold: substitute every
    // principal derivative by its right side (one simultaneous pass).
    Expr restrict(const Expr& e) const { return e.substitute(principal_substitution()); }

    // Coordinates of the barred chart: x, all jets of order < q, parametric
    // jets of order q.
    std::vector<VarId> barred_coordinates() const {
        std::vector<VarId> out;
        for (int i = 0; i < n(); ++i) out.push_back(chart_->indep(i));
        for (int ord = 0; ord < q_; ++ord)
            for (VarId v : chart_->jets_of_order(ord)) out.push_back(v);
        for (auto& [a, mu] : parametric_pairs()) out.push_back(chart_->jet(a, mu));
        return out;
    }

private:
    void sort_pairs(std::vector<std::pair<int, MultiIndex>>& ps) const {
        std::sort(ps.begin(), ps.end(), [](const auto& a, const auto& b) {
            return rank_compare(a.first, a.second, b.first, b.second) < 0;
        });
    }

    ChartPtr chart_;
    int q_;
    std::vector<Equation> eqs_;
};

using ReducedCNF = SolvedSystem; // q = 1 with the class conditions validated

/* Implicit representation: a list of equations Phi^tau = 0 of order <= q. */
class ImplicitSystem {
public:
    ImplicitSystem(ChartPtr chart, int q) : chart_(std::move(chart)), q_(q) {}

    void add_equation(Expr phi) { eqs_.push_back(std::move(phi)); }

    const ChartPtr& chart() const { return chart_; }
    int order() const { return q_; }
    const std::vector<Expr>& equations() const { return eqs_; }

    static ImplicitSystem from_solved(const SolvedSystem& s) {
        ImplicitSystem sys(s.chart(), s.order());
        for (auto& e : s.equations())
            sys.add_equation(Expr::variable(s.chart(), s.chart()->jet(e.alpha, e.mu)) - e.rhs);
        return sys;
    }

    // Formal derivative of every equation in every direction; originals kept.
    ImplicitSystem prolong() const {
        ImplicitSystem out(chart_, q_ + 1);
        for (const Expr& e : eqs_) out.add_equation(e);
        for (const Expr& e : eqs_)
            for (int i = 0; i < chart_->n(); ++i) out.add_equation(formal_derivative(e, i));
        return out;
    }

    // A point lies on the system iff every equation vanishes there.
    bool contains(const std::map<VarId, Rational>& point) const {
        for (const Expr& e : eqs_)
            if (e.eval_at(point) != 0) return false;
        return true;
    }

private:
    ChartPtr chart_;
    int q_;
    std::vector<Expr> eqs_;
};

} // namespace vessiot

#endif
