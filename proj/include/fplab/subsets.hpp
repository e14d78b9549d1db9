#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace fplab {

// Streams the size-k subsets of {0..n-1} in lexicographic order.  Supports
// starting from an arbitrary rank so a range can be partitioned across
// workers.
class SubsetEnumerator {
public:
    SubsetEnumerator(std::size_t n, std::size_t k);
    SubsetEnumerator(std::size_t n, std::size_t k, std::uint64_t start_rank);

    const std::vector<std::size_t>& current() const noexcept { return comb_; }

    // Moves to the lexicographic successor; false once the last subset has
    // been consumed.
    bool advance();

    // C(n, k), or throws Budget when it exceeds uint64 range.
    static std::uint64_t count(std::size_t n, std::size_t k);

private:
    std::size_t n_;
    std::size_t k_;
    std::vector<std::size_t> comb_;
};

// Calls fn once per size-l subset in lexicographic order and returns C(n, l).
// Throws Budget when C(n, l) exceeds the budget, pointing at monte-carlo mode.
std::uint64_t enumerate_draws(std::size_t n, std::size_t l, std::uint64_t budget,
                              const std::function<void(std::span<const std::size_t>)>& fn);

} // namespace fplab
