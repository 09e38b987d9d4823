#include "bma/bitvec.hpp"

#include <bit>

#include "bma/errors.hpp"

namespace bma {

namespace {
std::size_t words_for(std::size_t len) { return (len + 63) / 64; }
} // namespace

BitVector::BitVector(std::size_t len, bool value)
    : len_(len), words_(words_for(len), value ? ~std::uint64_t{0} : 0) {
    if (value && len_ % 64 != 0)
        words_.back() &= (std::uint64_t{1} << (len_ % 64)) - 1;
}

BitVector BitVector::from_string(std::string_view s) {
    BitVector v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '1')
            v.set(i, true);
        else if (s[i] != '0')
            throw ParseError("bit string may contain only '0' and '1'");
    }
    return v;
}

std::size_t BitVector::popcount() const {
    std::size_t total = 0;
    for (std::uint64_t w : words_) total += std::popcount(w);
    return total;
}

bool BitVector::any() const {
    for (std::uint64_t w : words_)
        if (w) return true;
    return false;
}

void BitVector::xor_with(const BitVector& other) {
    if (len_ != other.len_)
        throw DimensionError("xor of vectors with different lengths");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
}

BitVector BitVector::operator^(const BitVector& other) const {
    BitVector out = *this;
    out.xor_with(other);
    return out;
}

std::string BitVector::to_string() const {
    std::string s(len_, '0');
    for (std::size_t i = 0; i < len_; ++i)
        if (get(i)) s[i] = '1';
    return s;
}

bool BitVector::operator<(const BitVector& other) const {
    if (len_ != other.len_) return len_ < other.len_;
    for (std::size_t w = 0; w < words_.size(); ++w) {
        std::uint64_t diff = words_[w] ^ other.words_[w];
        if (diff) {
            // Lowest differing bit index decides; 0 < 1 at that position.
            std::uint64_t mask = diff & (~diff + 1);
            return (words_[w] & mask) == 0;
        }
    }
    return false;
}

std::size_t hamming(const BitVector& x, const BitVector& y) {
    if (x.size() != y.size())
        throw DimensionError("hamming distance of vectors with different lengths");
    std::size_t total = 0;
    const auto& xs = x.words();
    const auto& ys = y.words();
    for (std::size_t i = 0; i < xs.size(); ++i)
        total += std::popcount(xs[i] ^ ys[i]);
    return total;
}

} // namespace bma
