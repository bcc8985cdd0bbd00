#ifndef VESSIOT_SYMBOL_HPP
#define VESSIOT_SYMBOL_HPP

#include "linalg.hpp"
#include "system.hpp"

namespace vessiot {

/* Symbol matrix of a system: entries dPhi/du^alpha_mu over the top-order
 * jets, columns ordered descending in the ranking, rows ordered descending by
 * the leading pair of each equation (ties keep input order).
 */
struct SymbolData {
    SymMatrix matrix;
    std::vector<std::pair<int, MultiIndex>> columns; // labels, descending ranking
    std::vector<int> betas;                          // beta_q^(k) by pivot class, k-1 indexed
    int rank = 0;
    int dim_symbol = 0; // dim N_q = columns - rank
    std::vector<Expr> caveats;
};

namespace detail {

// rows of the symbol matrix for the given equations
inline SymbolData symbol_of_equations(const ChartPtr& chart, int q, std::vector<Expr> eqs,
                                      const SolvedSystem* restrict_by, std::mt19937_64& rng) {
    SymbolData out;
    std::vector<VarId> cols_asc = chart->jets_of_order(q);
    std::vector<VarId> cols(cols_asc.rbegin(), cols_asc.rend());

    // leading pair per equation for the row order
    std::vector<int> order(eqs.size());
    for (std::size_t i = 0; i < eqs.size(); ++i) order[i] = static_cast<int>(i);
    auto leading_col = [&](const Expr& e) {
        for (std::size_t c = 0; c < cols.size(); ++c)
            if (!e.diff(cols[c]).is_zero()) return static_cast<int>(c);
        return static_cast<int>(cols.size());
    };
    std::vector<int> lead(eqs.size());
    for (std::size_t i = 0; i < eqs.size(); ++i) lead[i] = leading_col(eqs[i]);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return lead[a] < lead[b]; });

    SymMatrix m(chart, static_cast<int>(eqs.size()), static_cast<int>(cols.size()));
    for (std::size_t r = 0; r < order.size(); ++r) {
        const Expr& phi = eqs[order[r]];
        for (std::size_t c = 0; c < cols.size(); ++c) {
            Expr entry = phi.diff(cols[c]);
            if (restrict_by && !entry.is_zero()) entry = restrict_by->restrict(entry);
            m.set(static_cast<int>(r), static_cast<int>(c), entry);
        }
    }
    for (std::size_t c = 0; c < cols.size(); ++c) {
        const VarInfo& vi = chart->info(cols[c]);
        m.set_col_label(static_cast<int>(c), vi.name);
        out.columns.emplace_back(vi.alpha, vi.mu);
    }

    EchelonResult ech = row_echelon(m);
    RankResult guard = rank_generic(m, rng); // cross-checked generic rank
    out.rank = guard.rank;
    out.caveats = guard.caveats;
    out.betas.assign(chart->n(), 0);
    for (auto& [r, c] : ech.pivots) out.betas[out.columns[c].second.cls() - 1]++;
    out.dim_symbol = static_cast<int>(cols.size()) - out.rank;
    out.matrix = std::move(m);
    return out;
}

} // namespace detail

inline SymbolData symbol_matrix(const ImplicitSystem& sys, std::mt19937_64& rng) {
    return detail::symbol_of_equations(sys.chart(), sys.order(), sys.equations(), nullptr, rng);
}

inline SymbolData symbol_matrix(const SolvedSystem& sys, std::mt19937_64& rng) {
    ImplicitSystem im = ImplicitSystem::from_solved(sys);
    return detail::symbol_of_equations(sys.chart(), sys.order(), im.equations(), &sys, rng);
}

struct CartanTest {
    bool passes = false;
    int rank_prolonged = 0; // rank of M_{q+1}
    int weighted_sum = 0;   // sum_k k beta_q^(k)
    std::vector<int> betas; // indices of the symbol at order q
    std::vector<Expr> caveats;
};

namespace detail {

inline CartanTest cartan_test_impl(const ChartPtr& chart, int q, const std::vector<Expr>& eqs,
                                   const SolvedSystem* restrict_by, std::mt19937_64& rng) {
    CartanTest out;
    SymbolData sym = symbol_of_equations(chart, q, eqs, restrict_by, rng);
    out.betas = sym.betas;
    for (int k = 0; k < chart->n(); ++k) out.weighted_sum += (k + 1) * sym.betas[k];

    std::vector<Expr> prolonged;
    for (const Expr& e : eqs)
        for (int i = 0; i < chart->n(); ++i) prolonged.push_back(formal_derivative(e, i));
    SymbolData next = symbol_of_equations(chart, q + 1, prolonged, restrict_by, rng);
    out.rank_prolonged = next.rank;
    out.caveats = next.caveats;
    for (const Expr& c : sym.caveats) out.caveats.push_back(c);
    out.passes = out.rank_prolonged == out.weighted_sum;
    return out;
}

} // namespace detail

inline CartanTest cartan_test(const ImplicitSystem& sys, std::mt19937_64& rng) {
    return detail::cartan_test_impl(sys.chart(), sys.order(), sys.equations(), nullptr, rng);
}

inline CartanTest cartan_test(const SolvedSystem& sys, std::mt19937_64& rng) {
    ImplicitSystem im = ImplicitSystem::from_solved(sys);
    return detail::cartan_test_impl(sys.chart(), sys.order(), im.equations(), &sys, rng);
}

} // namespace vessiot

#endif
