// k-subset enumeration in lexicographic order and saturating binomial
// coefficients for enumeration-budget checks.
#pragma once

#include <cstdint>
#include <vector>

#include "sparsedecomp/errors.hpp"

namespace sparsedecomp {

// C(n, k), saturating just above `cap` instead of overflowing. The
// stepwise update r <- r * (n-k+i) / i is exact at every step.
inline std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k,
                                     std::uint64_t cap = UINT64_MAX / 2) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    const std::uint64_t saturated = cap < UINT64_MAX ? cap + 1 : cap;
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        const std::uint64_t factor = n - k + i;
        const std::uint64_t q = r / i, rem = r % i;
        if (q > cap / factor) return saturated;
        r = q * factor + rem * factor / i;
        if (r > cap) return saturated;
    }
    return r;
}

// Lexicographic enumeration of the k-subsets of {0, ..., n-1}.
class CombinationIterator {
public:
    CombinationIterator(int n, int k) : n_(n), k_(k), current_(k) {
        if (k < 0 || n < 0 || k > n)
            throw PreconditionViolated("CombinationIterator: need 0 <= k <= n");
        for (int i = 0; i < k; ++i) current_[i] = i;
        done_ = false;
    }

    bool done() const { return done_; }
    const std::vector<int>& current() const { return current_; }

    void advance() {
        if (done_) return;
        int i = k_ - 1;
        while (i >= 0 && current_[i] == n_ - k_ + i) --i;
        if (i < 0) {
            done_ = true;  // the k == 0 case yields exactly one (empty) subset
            return;
        }
        ++current_[i];
        for (int j = i + 1; j < k_; ++j) current_[j] = current_[j - 1] + 1;
    }

private:
    int n_, k_;
    std::vector<int> current_;
    bool done_;
};

}  // namespace sparsedecomp
