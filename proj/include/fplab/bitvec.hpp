#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace fplab {

// Fixed-width bit vector over 64-bit words.  Used for induced labelings and
// draw membership masks; mismatch counts reduce to masked popcounts.
class BitVec {
public:
    BitVec() = default;

    explicit BitVec(std::size_t size)
        : size_(size), words_((size + 63) / 64, 0) {}

    // Builds from a "0101..." string; anything but 0/1 is rejected by the
    // caller-facing parsers before reaching here.
    static BitVec from_string(std::string_view bits) {
        BitVec out(bits.size());
        for (std::size_t i = 0; i < bits.size(); ++i) {
            if (bits[i] == '1') out.set(i);
        }
        return out;
    }

    std::size_t size() const noexcept { return size_; }

    void set(std::size_t i, bool value = true) {
        if (value) {
            words_[i >> 6] |= (std::uint64_t{1} << (i & 63));
        } else {
            words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
        }
    }

    bool test(std::size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1;
    }

    void clear() {
        for (auto& w : words_) w = 0;
    }

    // Number of set bits.
    std::size_t count() const noexcept {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    // popcount(a & b); sizes must match.
    static std::size_t and_count(const BitVec& a, const BitVec& b) {
        std::size_t c = 0;
        for (std::size_t i = 0; i < a.words_.size(); ++i) {
            c += static_cast<std::size_t>(std::popcount(a.words_[i] & b.words_[i]));
        }
        return c;
    }

    BitVec operator^(const BitVec& other) const {
        BitVec out(size_);
        for (std::size_t i = 0; i < words_.size(); ++i) {
            out.words_[i] = words_[i] ^ other.words_[i];
        }
        return out;
    }

    bool operator==(const BitVec& other) const {
        return size_ == other.size_ && words_ == other.words_;
    }

    // Dictionary order on the bit string read from index 0 upward.
    bool lex_less(const BitVec& other) const {
        std::size_t n = size_ < other.size_ ? size_ : other.size_;
        for (std::size_t i = 0; i < n; ++i) {
            bool a = test(i);
            bool b = other.test(i);
            if (a != b) return b;
        }
        return size_ < other.size_;
    }

    std::string to_string() const {
        std::string s(size_, '0');
        for (std::size_t i = 0; i < size_; ++i) {
            if (test(i)) s[i] = '1';
        }
        return s;
    }

    const std::vector<std::uint64_t>& words() const noexcept { return words_; }

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

inline bool operator<(const BitVec& a, const BitVec& b) { return a.lex_less(b); }

} // namespace fplab
