#ifndef VESSIOT_MULTIINDEX_HPP
#define VESSIOT_MULTIINDEX_HPP

#include <algorithm>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace vessiot {

/* Derivative multi-index (mu_1,...,mu_n), stored dense. */
struct MultiIndex {
    std::vector<int> counts;

    MultiIndex() = default;
    explicit MultiIndex(int n) : counts(n, 0) {}
    MultiIndex(std::initializer_list<int> c) : counts(c) {}

    int size() const { return static_cast<int>(counts.size()); }
    int order() const { return std::accumulate(counts.begin(), counts.end(), 0); }

    // smallest k (1-based) with mu_k != 0; undefined for the zero index
    int cls() const {
        for (int k = 0; k < size(); ++k)
            if (counts[k] != 0) return k + 1;
        throw std::domain_error("class of the zero multi-index is undefined");
    }

    MultiIndex plus(int i) const { // i is 0-based
        MultiIndex r = *this;
        r.counts.at(i) += 1;
        return r;
    }
    MultiIndex minus(int i) const {
        MultiIndex r = *this;
        if (r.counts.at(i) == 0) throw std::domain_error("multi-index entry underflow");
        r.counts[i] -= 1;
        return r;
    }

    bool is_zero() const {
        for (int c : counts)
            if (c) return false;
        return true;
    }

    bool operator==(const MultiIndex& o) const { return counts == o.counts; }
    bool operator!=(const MultiIndex& o) const { return !(*this == o); }
    bool operator<(const MultiIndex& o) const { return counts < o.counts; } // container order, for maps only
};

/* Degree reverse lexicographic ranking on pairs (alpha, mu), lifted
 * term-over-position: order decides first, then the leftmost nonvanishing
 * entry of mu - nu (positive means smaller), ties broken by alpha.
 * Returns <0, 0, >0 like a comparator.
 */
inline int rank_compare(int alpha, const MultiIndex& mu, int beta, const MultiIndex& nu) {
    int du = mu.order(), dv = nu.order();
    if (du != dv) return du < dv ? -1 : 1;
    for (int k = 0; k < mu.size(); ++k) {
        int d = mu.counts[k] - nu.counts[k];
        if (d != 0) return d > 0 ? -1 : 1;
    }
    if (alpha != beta) return alpha < beta ? -1 : 1;
    return 0;
}

// All multi-indices of the given order, ascending in the ranking above.
inline std::vector<MultiIndex> multiindices_of_order(int n, int order) {
    std::vector<MultiIndex> out;
    MultiIndex cur(n);
    // enumerate recursively, then sort by ranking
    std::vector<MultiIndex> all;
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == n - 1) {
            cur.counts[pos] = left;
            all.push_back(cur);
            return;
        }
        for (int k = left; k >= 0; --k) {
            cur.counts[pos] = k;
            rec(pos + 1, left - k);
        }
        cur.counts[pos] = 0;
    };
    if (n > 0) rec(0, order);
    std::sort(all.begin(), all.end(), [](const MultiIndex& a, const MultiIndex& b) {
        return rank_compare(0, a, 0, b) < 0;
    });
    return all;
}

} // namespace vessiot

#endif
