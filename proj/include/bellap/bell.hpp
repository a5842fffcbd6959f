#pragma once

#include <utility>
#include <vector>

#include "bellap/rational.hpp"

namespace bellap {

// Triangular table of partial Bell polynomial values B(n, k) for the fixed
// input vector g, built once by the recursion
//   B(n, k) = sum_{h=0}^{n-k} C(n-1, h) * B(n-h-1, k-1) * g_{h+1}
// seeded with B(0,0) = 1, B(n,0) = 0 for n >= 1.
class PartialBellTable {
public:
    PartialBellTable(std::vector<Rational> g, int n_max)
        : n_max_(n_max), g_(std::move(g)) {
        if (n_max_ < 0) throw domain_error("table order must be >= 0");
        if (static_cast<int>(g_.size()) < n_max_)
            throw domain_error("need g_1..g_n to build a Bell table of order n");
        rows_.resize(n_max_ + 1);
        rows_[0] = {Rational(1)};
        for (int n = 1; n <= n_max_; ++n) {
            rows_[n].assign(n + 1, Rational(0));
            for (int k = 1; k <= n; ++k) {
                Rational acc = 0;
                for (int h = 0; h <= n - k; ++h)
                    acc += Rational(binomial(n - 1, h)) * rows_[n - h - 1][k - 1] * g_[h];
                rows_[n][k] = std::move(acc);
            }
        }
    }

    int order() const { return n_max_; }
    const std::vector<Rational>& inputs() const { return g_; }

    const Rational& at(int n, int k) const {
        if (n < 0 || n > n_max_ || k < 0 || k > n)
            throw domain_error("Bell table index out of range");
        return rows_[n][k];
    }

    // Y_n against weights f_1..f_n: sum_k B(n,k) f_k.
    Rational complete(int n, const std::vector<Rational>& f) const {
        if (n < 1 || n > n_max_) throw domain_error("Bell table index out of range");
        if (static_cast<int>(f.size()) < n)
            throw domain_error("need f_1..f_n for a complete Bell value");
        Rational acc = 0;
        for (int k = 1; k <= n; ++k) acc += rows_[n][k] * f[k - 1];
        return acc;
    }

private:
    int n_max_;
    std::vector<Rational> g_;
    std::vector<std::vector<Rational>> rows_;
};

inline Rational partial_bell(int n, int k, const std::vector<Rational>& g) {
    if (n < 1) throw domain_error("partial Bell value needs n >= 1");
    if (k < 1 || k > n) throw domain_error("partial Bell value needs 1 <= k <= n");
    if (static_cast<int>(g.size()) < n - k + 1)
        throw domain_error("g too short: need n-k+1 entries");
    // The recursion only consults g_1..g_{n-k+1}, but the table wants n
    // entries; pad with zeros, which cannot contribute to B(n, k).
    std::vector<Rational> padded(g.begin(), g.end());
    padded.resize(std::max<std::size_t>(padded.size(), n), Rational(0));
    return PartialBellTable(std::move(padded), n).at(n, k);
}

inline Rational complete_bell(int n, const std::vector<Rational>& f,
                              const std::vector<Rational>& g) {
    if (n < 1) throw domain_error("complete Bell value needs n >= 1");
    if (static_cast<int>(f.size()) != n || static_cast<int>(g.size()) != n)
        throw domain_error("complete Bell value needs exactly n entries in f and g");
    return PartialBellTable(g, n).complete(n, f);
}

inline Integer stirling2(int n, int k) {
    if (n < 0 || k < 0 || k > n) throw domain_error("Stirling number needs 0 <= k <= n");
    // S(n,k) = k S(n-1,k) + S(n-1,k-1); one rolling row suffices.
    std::vector<Integer> row(k + 1, 0);
    row[0] = 1;
    for (int i = 1; i <= n; ++i) {
        for (int j = std::min(i, k); j >= 1; --j)
            row[j] = Integer(j) * row[j] + row[j - 1];
        row[0] = 0;
    }
    return row[k];
}

// Independent oracle: enumerate every partition of {1..n} into exactly k
// blocks (restricted growth strings) and sum the products of g_{|block|}.
// Exponential in n; guarded by the size limit.
inline Rational bell_partition_oracle(int n, int k, const std::vector<Rational>& g,
                                      int oracle_limit = 12) {
    if (n < 1) throw domain_error("partition oracle needs n >= 1");
    if (k < 1 || k > n) throw domain_error("partition oracle needs 1 <= k <= n");
    if (static_cast<int>(g.size()) < n - k + 1)
        throw domain_error("g too short: need n-k+1 entries");
    if (n > oracle_limit)
        throw domain_error("partition oracle limited to n <= " + std::to_string(oracle_limit));

    auto g_at = [&](int size) -> Rational {
        return size <= static_cast<int>(g.size()) ? g[size - 1] : Rational(0);
    };

    Rational total = 0;
    std::vector<int> block_size(k, 0);
    // assign element i to one of the used blocks or open block 'used'
    auto rec = [&](auto&& self, int i, int used) -> void {
        if (n - i < k - used) return;  // not enough elements left to open k blocks
        if (i == n) {
            if (used == k) {
                Rational prod = 1;
                for (int b = 0; b < k; ++b) prod *= g_at(block_size[b]);
                total += prod;
            }
            return;
        }
        for (int b = 0; b < used; ++b) {
            ++block_size[b];
            self(self, i + 1, used);
            --block_size[b];
        }
        if (used < k) {
            block_size[used] = 1;
            self(self, i + 1, used + 1);
            block_size[used] = 0;
        }
    };
    rec(rec, 0, 0);
    return total;
}

}  // namespace bellap
