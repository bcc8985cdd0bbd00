#ifndef VESSIOT_LINALG_HPP
#define VESSIOT_LINALG_HPP

#include "expr.hpp"

#include <optional>
#include <random>

namespace vessiot {

/* Dense matrix of exact expressions with row/column labels.  Entries are
 * zeta-free for everything rank-related; solve_affine right sides may carry
 * formal unknowns (treated as transcendentals).
 */
class SymMatrix {
public:
    SymMatrix() = default;
    SymMatrix(ChartPtr chart, int rows, int cols)
        : chart_(std::move(chart)), rows_(rows), cols_(cols),
          a_(static_cast<std::size_t>(rows) * cols, Expr::constant(chart_, Rational(0))),
          row_labels_(rows), col_labels_(cols) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const ChartPtr& chart() const { return chart_; }

    const Expr& at(int r, int c) const { return a_.at(idx(r, c)); }
    void set(int r, int c, Expr e) { a_.at(idx(r, c)) = std::move(e); }

    const std::string& row_label(int r) const { return row_labels_.at(r); }
    const std::string& col_label(int c) const { return col_labels_.at(c); }
    void set_row_label(int r, std::string s) { row_labels_.at(r) = std::move(s); }
    void set_col_label(int c, std::string s) { col_labels_.at(c) = std::move(s); }

    SymMatrix transpose() const {
        SymMatrix t(chart_, cols_, rows_);
        for (int r = 0; r < rows_; ++r)
            for (int c = 0; c < cols_; ++c) t.set(c, r, at(r, c));
        t.row_labels_ = col_labels_;
        t.col_labels_ = row_labels_;
        return t;
    }

    static SymMatrix hcat(const SymMatrix& a, const SymMatrix& b) {
        if (a.rows_ != b.rows_) throw std::invalid_argument("hcat: row mismatch");
        SymMatrix r(a.chart_, a.rows_, a.cols_ + b.cols_);
        for (int i = 0; i < a.rows_; ++i) {
            for (int j = 0; j < a.cols_; ++j) r.set(i, j, a.at(i, j));
            for (int j = 0; j < b.cols_; ++j) r.set(i, a.cols_ + j, b.at(i, j));
        }
        r.row_labels_ = a.row_labels_;
        for (int j = 0; j < a.cols_; ++j) r.col_labels_[j] = a.col_labels_[j];
        for (int j = 0; j < b.cols_; ++j) r.col_labels_[a.cols_ + j] = b.col_labels_[j];
        return r;
    }
    static SymMatrix vcat(const SymMatrix& a, const SymMatrix& b) {
        if (a.cols_ != b.cols_) throw std::invalid_argument("vcat: column mismatch");
        SymMatrix r(a.chart_, a.rows_ + b.rows_, a.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int j = 0; j < a.cols_; ++j) r.set(i, j, a.at(i, j));
        for (int i = 0; i < b.rows_; ++i)
            for (int j = 0; j < a.cols_; ++j) r.set(a.rows_ + i, j, b.at(i, j));
        r.col_labels_ = a.col_labels_;
        for (int i = 0; i < a.rows_; ++i) r.row_labels_[i] = a.row_labels_[i];
        for (int i = 0; i < b.rows_; ++i) r.row_labels_[a.rows_ + i] = b.row_labels_[i];
        return r;
    }

    std::vector<VarId> variables() const {
        std::vector<VarId> vs;
        for (const Expr& e : a_) {
            auto w = e.variables();
            vs.insert(vs.end(), w.begin(), w.end());
        }
        std::sort(vs.begin(), vs.end());
        vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
        return vs;
    }

private:
    std::size_t idx(int r, int c) const {
        if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw std::out_of_range("SymMatrix::at");
        return static_cast<std::size_t>(r) * cols_ + c;
    }

    ChartPtr chart_;
    int rows_ = 0, cols_ = 0;
    std::vector<Expr> a_;
    std::vector<std::string> row_labels_, col_labels_;
};

struct EchelonResult {
    SymMatrix mat;                          // fraction-free echelon form
    std::vector<std::pair<int, int>> pivots; // (row, col), columns increasing
    std::vector<Expr> pivot_values;          // elimination trace: pivot at each step
    std::vector<Expr> caveats;               // non-constant pivots (rank may drop on their zero sets)
    int rank = 0;
};

/* Fraction-free (Bareiss) elimination.  Row denominators are cleared first,
 * pivots are chosen per column as the structurally smallest nonzero entry
 * (fewest monomials) to tame expression swell.  Columns are processed in
 * label order.
 */
inline EchelonResult row_echelon(const SymMatrix& m) {
    EchelonResult res;
    SymMatrix w = m;
    const ChartPtr& chart = m.chart();
    Expr one = Expr::constant(chart, Rational(1));

    // clear denominators rowwise (rank-neutral)
    for (int r = 0; r < w.rows(); ++r) {
        Poly l(Rational(1));
        for (int c = 0; c < w.cols(); ++c) {
            const Poly& d = w.at(r, c).den();
            if (!(d.is_constant() && d.constant_value() == 1)) {
                Poly g = poly_gcd(l, d);
                l = *Poly::divide_exact(l * d, g);
            }
        }
        if (!(l.is_constant() && l.constant_value() == 1)) {
            Expr f = Expr::from_fraction(chart, l, Poly(Rational(1)));
            for (int c = 0; c < w.cols(); ++c) w.set(r, c, w.at(r, c) * f);
        }
    }

    int row = 0;
    Expr prev = one;
    for (int col = 0; col < w.cols() && row < w.rows(); ++col) {
        int best = -1;
        std::size_t best_size = 0;
        for (int r = row; r < w.rows(); ++r) {
            const Expr& e = w.at(r, col);
            if (e.is_zero()) continue;
            std::size_t sz = e.num().size();
            if (best < 0 || sz < best_size) {
                best = r;
                best_size = sz;
            }
        }
        if (best < 0) continue;
        if (best != row)
            for (int c = 0; c < w.cols(); ++c) {
                Expr tmp = w.at(row, c);
                w.set(row, c, w.at(best, c));
                w.set(best, c, tmp);
            }
        Expr pivot = w.at(row, col);
        res.pivots.emplace_back(row, col);
        res.pivot_values.push_back(pivot);
        if (!pivot.is_constant()) res.caveats.push_back(pivot);
        for (int r = row + 1; r < w.rows(); ++r) {
            Expr factor = w.at(r, col);
            for (int c = 0; c < w.cols(); ++c) {
                Expr v = (w.at(r, c) * pivot - factor * w.at(row, c)) / prev;
                w.set(r, c, std::move(v));
            }
        }
        prev = pivot;
        ++row;
    }
    res.rank = static_cast<int>(res.pivots.size());
    res.mat = std::move(w);
    return res;
}

namespace detail {

inline int rational_rank(std::vector<std::vector<Rational>> a) {
    int rows = static_cast<int>(a.size());
    int cols = rows ? static_cast<int>(a[0].size()) : 0;
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int piv = -1;
        for (int r = rank; r < rows; ++r)
            if (a[r][col] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        std::swap(a[rank], a[piv]);
        for (int r = rank + 1; r < rows; ++r) {
            if (a[r][col] == 0) continue;
            Rational f = a[r][col] / a[rank][col];
            for (int c = col; c < cols; ++c) a[r][c] -= f * a[rank][c];
        }
        ++rank;
    }
    return rank;
}

inline Rational random_rational(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-11, 11);
    std::uniform_int_distribution<int> den(1, 7);
    return Rational(num(rng), den(rng));
}

// Any solution of a*x = b over Q, or nullopt when inconsistent.
inline std::optional<std::vector<Rational>> rational_solve(std::vector<std::vector<Rational>> a,
                                                           std::vector<Rational> b) {
    int rows = static_cast<int>(a.size());
    int cols = rows ? static_cast<int>(a[0].size()) : 0;
    std::vector<std::pair<int, int>> pivots;
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int piv = -1;
        for (int r = rank; r < rows; ++r)
            if (a[r][col] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        std::swap(a[rank], a[piv]);
        std::swap(b[rank], b[piv]);
        for (int r = 0; r < rows; ++r) {
            if (r == rank || a[r][col] == 0) continue;
            Rational f = a[r][col] / a[rank][col];
            for (int c = col; c < cols; ++c) a[r][c] -= f * a[rank][c];
            b[r] -= f * b[rank];
        }
        pivots.emplace_back(rank, col);
        ++rank;
    }
    for (int r = rank; r < rows; ++r)
        if (b[r] != 0) return std::nullopt;
    std::vector<Rational> x(cols, Rational(0));
    for (auto& [r, c] : pivots) x[c] = b[r] / a[r][c];
    return x;
}

} // namespace detail

struct RankResult {
    int rank = 0;
    std::vector<Expr> caveats; // non-constant pivot expressions
};

/* Rank over the field of rational functions, guarded: the symbolic result is
 * cross-checked by exact evaluation at random rational points that avoid the
 * pivot loci.  A mismatch can only come from a zero-test defect and throws.
 */
inline RankResult rank_generic(const SymMatrix& m, std::mt19937_64& rng, int checks = 3) {
    EchelonResult ech = row_echelon(m);
    RankResult out{ech.rank, ech.caveats};
    std::vector<VarId> vars = m.variables();
    if (vars.empty()) return out; // constant matrix: elimination was exact arithmetic already

    for (int attempt = 0, done = 0; done < checks && attempt < 60 * checks; ++attempt) {
        std::map<VarId, Rational> point;
        for (VarId v : vars) point[v] = detail::random_rational(rng);
        bool usable = true;
        for (const Expr& c : ech.caveats) {
            try {
                if (c.eval_at(point) == 0) usable = false;
            } catch (const ExprError&) {
                usable = false;
            }
            if (!usable) break;
        }
        if (usable) {
            std::vector<std::vector<Rational>> num(m.rows(), std::vector<Rational>(m.cols()));
            try {
                for (int r = 0; r < m.rows() && usable; ++r)
                    for (int c = 0; c < m.cols(); ++c) num[r][c] = m.at(r, c).eval_at(point);
            } catch (const ExprError&) {
                usable = false; // an entry denominator vanished; resample
            }
            if (usable) {
                if (detail::rational_rank(num) != ech.rank)
                    throw std::logic_error("rank_generic: random evaluation contradicts the "
                                           "symbolic rank (zero-test defect)");
                ++done;
            }
        }
    }
    return out;
}

/* Nullspace basis over the function field, primitive-scaled so the entries
 * are polynomial with coprime content.
 */
inline std::vector<std::vector<Expr>> nullspace(const SymMatrix& m) {
    EchelonResult ech = row_echelon(m);
    const ChartPtr& chart = m.chart();
    Expr zero = Expr::constant(chart, Rational(0));
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto& [r, c] : ech.pivots) is_pivot[c] = true;

    std::vector<std::vector<Expr>> basis;
    for (int free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        std::vector<Expr> x(m.cols(), zero);
        x[free] = Expr::constant(chart, Rational(1));
        // back-substitute pivot rows bottom-up
        for (int p = static_cast<int>(ech.pivots.size()) - 1; p >= 0; --p) {
            auto [r, c] = ech.pivots[p];
            Expr s = zero;
            for (int j = c + 1; j < m.cols(); ++j)
                if (!ech.mat.at(r, j).is_zero() && !x[j].is_zero()) s = s + ech.mat.at(r, j) * x[j];
            x[c] = (zero - s) / ech.mat.at(r, c);
        }
        // primitive scaling: clear denominators, remove common polynomial factor
        Poly l(Rational(1));
        for (const Expr& e : x)
            if (!e.is_zero()) {
                Poly g = poly_gcd(l, e.den());
                l = *Poly::divide_exact(l * e.den(), g);
            }
        Expr scale = Expr::from_fraction(chart, l, Poly(Rational(1)));
        for (Expr& e : x) e = e * scale;
        Poly g;
        for (const Expr& e : x) g = g.is_zero() ? e.num() : poly_gcd(g, e.num());
        if (!g.is_zero() && !(g.is_constant() && g.constant_value() == 1)) {
            Expr gd = Expr::from_fraction(chart, g, Poly(Rational(1)));
            for (Expr& e : x)
                if (!e.is_zero()) e = e / gd;
        }
        // fix the sign of the first nonzero entry
        for (const Expr& e : x) {
            if (e.is_zero()) continue;
            if (e.num().leading().c < 0)
                for (Expr& f : x) f = -f;
            break;
        }
        basis.push_back(std::move(x));
    }
    return basis;
}

struct AffineSolution {
    bool consistent = true;
    int offending_row = -1;
    Expr residual;                 // nonzero right side of a vanished row
    std::map<int, Expr> assigned;  // column index -> expression in free symbols
    std::vector<int> free_columns; // identified by index (labels on the matrix)
};

/* Solve A x = b over the function field.  The right side may carry formal
 * unknowns; pivoting happens in A only, so consistency is decided by the
 * exact zero test on the residual rows.  Free unknowns keep their caller
 * -supplied stand-in expressions.
 */
inline AffineSolution solve_affine(const SymMatrix& a, const std::vector<Expr>& b,
                                   const std::vector<Expr>& unknown_symbols) {
    if (static_cast<int>(b.size()) != a.rows() ||
        static_cast<int>(unknown_symbols.size()) != a.cols())
        throw std::invalid_argument("solve_affine: shape mismatch");
    const ChartPtr& chart = a.chart();
    Expr zero = Expr::constant(chart, Rational(0));

    SymMatrix w = a;
    std::vector<Expr> rhs = b;
    std::vector<std::pair<int, int>> pivots;
    int row = 0;
    for (int col = 0; col < w.cols() && row < w.rows(); ++col) {
        int best = -1;
        std::size_t best_size = 0;
        for (int r = row; r < w.rows(); ++r) {
            if (w.at(r, col).is_zero()) continue;
            std::size_t sz = w.at(r, col).num().size() + w.at(r, col).den().size();
            if (best < 0 || sz < best_size) {
                best = r;
                best_size = sz;
            }
        }
        if (best < 0) continue;
        if (best != row) {
            for (int c = 0; c < w.cols(); ++c) {
                Expr t = w.at(row, c);
                w.set(row, c, w.at(best, c));
                w.set(best, c, t);
            }
            std::swap(rhs[row], rhs[best]);
        }
        Expr pivot = w.at(row, col);
        for (int r = 0; r < w.rows(); ++r) {
            if (r == row || w.at(r, col).is_zero()) continue;
            Expr f = w.at(r, col) / pivot;
            for (int c = col; c < w.cols(); ++c) w.set(r, c, w.at(r, c) - f * w.at(row, c));
            rhs[r] = rhs[r] - f * rhs[row];
        }
        pivots.emplace_back(row, col);
        ++row;
    }

    AffineSolution sol;
    sol.residual = zero;
    std::vector<bool> pivot_col(w.cols(), false);
    for (auto& [r, c] : pivots) pivot_col[c] = true;
    for (int r = row; r < w.rows(); ++r) {
        if (!rhs[r].is_zero()) {
            sol.consistent = false;
            sol.offending_row = r;
            sol.residual = rhs[r];
            return sol;
        }
    }
    for (int c = 0; c < w.cols(); ++c)
        if (!pivot_col[c]) sol.free_columns.push_back(c);
    for (auto& [r, c] : pivots) {
        Expr v = rhs[r];
        for (int j : sol.free_columns)
            if (!w.at(r, j).is_zero()) v = v - w.at(r, j) * unknown_symbols[j];
        sol.assigned[c] = v / w.at(r, c);
    }
    return sol;
}

} // namespace vessiot

#endif
