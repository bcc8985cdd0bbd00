#ifndef VESSIOT_CHART_HPP
#define VESSIOT_CHART_HPP

#include "multiindex.hpp"
#include "poly.hpp"

#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace vessiot {

enum class VarKind {
    Indep,    // x^i
    Jet,      // u^alpha_mu (|mu| = 0 is the dependent variable itself)
    Param,    // declared symbolic constant
    Zeta,     // undetermined coefficient function zeta_sub^(alpha,mu)
    ZetaDiff, // first or second formal partial of a Zeta
};

struct VarInfo {
    VarKind kind;
    int i = -1;    // Indep: independent index, 0-based
    int alpha = -1;
    MultiIndex mu; // Jet / Zeta label
    int zsub = 0;  // Zeta: vector subscript, 1-based
    VarId base = 0;
    std::vector<VarId> dcoords; // ZetaDiff: differentiation coords, sorted, size 1 or 2
    std::string name;
};

/* Coordinate chart of a jet bundle plus the symbol table every Expr refers
 * to.  Jet variables of any order are interned on demand (prolongations need
 * orders above q).  Charts are created through Chart::create and shared via
 * shared_ptr; interning is guarded so expressions can be evaluated from
 * several threads.
 */
class Chart : public std::enable_shared_from_this<Chart> {
public:
    static std::shared_ptr<Chart> create(int n, int m, int q,
                                         std::vector<std::string> xnames,
                                         std::vector<std::string> unames) {
        if (static_cast<int>(xnames.size()) != n || static_cast<int>(unames.size()) != m)
            throw std::invalid_argument("Chart: name count mismatch");
        auto c = std::shared_ptr<Chart>(new Chart());
        c->n_ = n;
        c->m_ = m;
        c->q_ = q;
        c->xnames_ = std::move(xnames);
        c->unames_ = std::move(unames);
        for (int i = 0; i < n; ++i) {
            VarInfo v;
            v.kind = VarKind::Indep;
            v.i = i;
            v.name = c->xnames_[i];
            c->push(v);
        }
        return c;
    }

    int n() const { return n_; }
    int m() const { return m_; }
    int q() const { return q_; }
    const std::string& xname(int i) const { return xnames_.at(i); }
    const std::string& uname(int a) const { return unames_.at(a); }

    VarId indep(int i) const {
        if (i < 0 || i >= n_) throw std::out_of_range("Chart::indep");
        return static_cast<VarId>(i);
    }

    VarId jet(int alpha, const MultiIndex& mu) const {
        if (alpha < 0 || alpha >= m_) throw std::out_of_range("Chart::jet: dependent index");
        if (mu.size() != n_) throw std::invalid_argument("Chart::jet: multi-index length");
        std::lock_guard<std::mutex> lock(mu_);
        auto key = std::make_pair(alpha, mu.counts);
        auto it = jets_.find(key);
        if (it != jets_.end()) return it->second;
        VarInfo v;
        v.kind = VarKind::Jet;
        v.alpha = alpha;
        v.mu = mu;
        v.name = jet_name(alpha, mu);
        VarId id = push(v);
        jets_.emplace(std::move(key), id);
        return id;
    }

    VarId dependent(int alpha) const { return jet(alpha, MultiIndex(n_)); }

    VarId add_param(const std::string& name) const {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = params_.find(name);
        if (it != params_.end()) return it->second;
        VarInfo v;
        v.kind = VarKind::Param;
        v.name = name;
        VarId id = push(v);
        params_.emplace(name, id);
        return id;
    }

    VarId zeta(int sub, int alpha, const MultiIndex& mu) const {
        std::lock_guard<std::mutex> lock(mu_);
        auto key = std::make_tuple(sub, alpha, mu.counts);
        auto it = zetas_.find(key);
        if (it != zetas_.end()) return it->second;
        VarInfo v;
        v.kind = VarKind::Zeta;
        v.zsub = sub;
        v.alpha = alpha;
        v.mu = mu;
        v.name = "zeta_" + std::to_string(sub) + "[" + jet_name(alpha, mu) + "]";
        VarId id = push(v);
        zetas_.emplace(std::move(key), id);
        return id;
    }

    // formal partial of a Zeta or of a first-order ZetaDiff
    VarId zeta_diff(VarId base, VarId coord) const {
        const VarInfo& b = info(base);
        const VarInfo& c = info(coord);
        if (c.kind != VarKind::Indep && c.kind != VarKind::Jet)
            throw std::invalid_argument("formal partial: differentiation target must be a coordinate");
        VarId root = base;
        std::vector<VarId> dcoords;
        if (b.kind == VarKind::Zeta) {
            dcoords = {coord};
        } else if (b.kind == VarKind::ZetaDiff) {
            if (b.dcoords.size() >= 2)
                throw std::domain_error("formal partials beyond second order are not carried");
            root = b.base;
            dcoords = b.dcoords;
            dcoords.push_back(coord);
            std::sort(dcoords.begin(), dcoords.end());
        } else {
            throw std::invalid_argument("zeta_diff: base is not a formal unknown");
        }
        std::lock_guard<std::mutex> lock(mu_);
        auto key = std::make_pair(root, dcoords);
        auto it = zdiffs_.find(key);
        if (it != zdiffs_.end()) return it->second;
        VarInfo v;
        v.kind = VarKind::ZetaDiff;
        v.base = root;
        v.dcoords = dcoords;
        std::string nm = dcoords.size() == 1 ? "D(" : "D2(";
        nm += vars_[root].name + ";";
        for (std::size_t k = 0; k < dcoords.size(); ++k)
            nm += (k ? "," : "") + vars_[dcoords[k]].name;
        nm += ")";
        v.name = nm;
        VarId id = push(v);
        zdiffs_.emplace(std::move(key), id);
        return id;
    }

    const VarInfo& info(VarId v) const {
        std::lock_guard<std::mutex> lock(mu_);
        return vars_.at(v);
    }
    std::string name(VarId v) const { return info(v).name; }
    bool is_coordinate(VarId v) const {
        VarKind k = info(v).kind;
        return k == VarKind::Indep || k == VarKind::Jet;
    }

    // All jet variables of exactly the given order, ascending in the ranking
    // (class-1 block first, alpha inside).
    std::vector<VarId> jets_of_order(int order) const {
        std::vector<VarId> out;
        for (const MultiIndex& mu : multiindices_of_order(n_, order))
            for (int a = 0; a < m_; ++a) out.push_back(jet(a, mu));
        std::sort(out.begin(), out.end(), [&](VarId x, VarId y) {
            const VarInfo &a = info(x), &b = info(y);
            return rank_compare(a.alpha, a.mu, b.alpha, b.mu) < 0;
        });
        return out;
    }

    std::string jet_name(int alpha, const MultiIndex& mu) const {
        if (mu.is_zero()) return unames_.at(alpha);
        std::string s = unames_.at(alpha) + "_";
        for (int i = 0; i < n_; ++i)
            for (int k = 0; k < mu.counts[i]; ++k) s += xnames_[i];
        return s;
    }

private:
    Chart() = default;
    VarId push(const VarInfo& v) const {
        vars_.push_back(v);
        return static_cast<VarId>(vars_.size() - 1);
    }

    int n_ = 0, m_ = 0, q_ = 1;
    std::vector<std::string> xnames_, unames_;

    mutable std::mutex mu_;
    mutable std::deque<VarInfo> vars_; // deque: stable references across interning
    mutable std::map<std::pair<int, std::vector<int>>, VarId> jets_;
    mutable std::map<std::string, VarId> params_;
    mutable std::map<std::tuple<int, int, std::vector<int>>, VarId> zetas_;
    mutable std::map<std::pair<VarId, std::vector<VarId>>, VarId> zdiffs_;
};

using ChartPtr = std::shared_ptr<const Chart>;

} // namespace vessiot

#endif
