#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bma {

// Fixed-length vector over {0,1}, packed 64 bits per word. Bit i lives in
// word i/64 at position i%64. Comparison is lexicographic by bit index so
// ordering matches the 0/1-string reading.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t len, bool value = false);
    static BitVector from_string(std::string_view s);

    std::size_t size() const { return len_; }
    bool empty() const { return len_ == 0; }

    bool get(std::size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }
    void set(std::size_t i, bool v) {
        std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (v)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }
    void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    std::size_t popcount() const;
    bool any() const;

    void xor_with(const BitVector& other);
    BitVector operator^(const BitVector& other) const;

    std::string to_string() const;

    bool operator==(const BitVector& other) const {
        return len_ == other.len_ && words_ == other.words_;
    }
    bool operator!=(const BitVector& other) const { return !(*this == other); }
    bool operator<(const BitVector& other) const;

    const std::vector<std::uint64_t>& words() const { return words_; }

private:
    std::size_t len_ = 0;
    std::vector<std::uint64_t> words_;
};

// Hamming distance between equal-length vectors; throws DimensionError on
// length mismatch. Symmetric, zero iff equal.
std::size_t hamming(const BitVector& x, const BitVector& y);

} // namespace bma
