#include "fplab/subsets.hpp"

#include <numeric>
#include <string>

#include "fplab/error.hpp"
#include "fplab/rational.hpp"

namespace fplab {

SubsetEnumerator::SubsetEnumerator(std::size_t n, std::size_t k) : n_(n), k_(k) {
    if (k > n) raise(ErrorKind::Dimension, "subset size exceeds ground set");
    comb_.resize(k);
    std::iota(comb_.begin(), comb_.end(), std::size_t{0});
}

SubsetEnumerator::SubsetEnumerator(std::size_t n, std::size_t k, std::uint64_t start_rank)
    : SubsetEnumerator(n, k) {
    // Combinatorial number system unranking: peel off leading elements,
    // skipping C(n - 1 - x, k - 1 - pos) ranks per candidate x.
    std::uint64_t rem = start_rank;
    std::size_t x = 0;
    for (std::size_t pos = 0; pos < k; ++pos) {
        for (;;) {
            std::uint64_t block = binomial_u64(n - 1 - x, k - 1 - pos);
            if (rem < block) break;
            rem -= block;
            ++x;
        }
        comb_[pos] = x;
        ++x;
    }
}

bool SubsetEnumerator::advance() {
    if (k_ == 0) return false;
    std::size_t i = k_;
    while (i-- > 0) {
        if (comb_[i] != n_ - k_ + i) {
            ++comb_[i];
            for (std::size_t j = i + 1; j < k_; ++j) comb_[j] = comb_[j - 1] + 1;
            return true;
        }
    }
    return false;
}

std::uint64_t SubsetEnumerator::count(std::size_t n, std::size_t k) {
    return binomial_u64(n, k);
}

std::uint64_t enumerate_draws(std::size_t n, std::size_t l, std::uint64_t budget,
                              const std::function<void(std::span<const std::size_t>)>& fn) {
    if (l < 1 || l > n) {
        raise(ErrorKind::Dimension,
              "draw size " + std::to_string(l) + " outside 1.." + std::to_string(n));
    }
    BigInt total = binomial(n, l);
    if (total > budget) {
        raise(ErrorKind::Budget,
              "C(" + std::to_string(n) + "," + std::to_string(l) + ") = " + total.get_str() +
                  " exceeds enumeration budget " + std::to_string(budget) +
                  "; use monte-carlo mode");
    }
    SubsetEnumerator it(n, l);
    do {
        fn(it.current());
    } while (it.advance());
    return total.get_ui();
}

} // namespace fplab
