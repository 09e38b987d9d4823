#include "bma/matrix.hpp"

#include <algorithm>
#include <bit>
#include <map>

#include "bma/errors.hpp"

namespace bma {

namespace {
std::size_t words_for(std::size_t len) { return (len + 63) / 64; }
} // namespace

BinaryMatrix::BinaryMatrix(std::size_t m, std::size_t n)
    : m_(m),
      n_(n),
      row_words_(words_for(n)),
      col_words_(words_for(m)),
      row_bits_(m * row_words_, 0),
      col_bits_(n * col_words_, 0) {}

BinaryMatrix BinaryMatrix::from_rows(const std::vector<std::string>& rows) {
    std::size_t m = rows.size();
    std::size_t n = m == 0 ? 0 : rows[0].size();
    BinaryMatrix a(m, n);
    for (std::size_t i = 0; i < m; ++i) {
        if (rows[i].size() != n)
            throw DimensionError("matrix rows have unequal lengths");
        for (std::size_t j = 0; j < n; ++j) {
            if (rows[i][j] == '1')
                a.set(i, j, true);
            else if (rows[i][j] != '0')
                throw ParseError("matrix entries must be '0' or '1'");
        }
    }
    return a;
}

BinaryMatrix BinaryMatrix::from_row_vectors(const std::vector<BitVector>& rows) {
    std::size_t m = rows.size();
    std::size_t n = m == 0 ? 0 : rows[0].size();
    BinaryMatrix a(m, n);
    for (std::size_t i = 0; i < m; ++i) {
        if (rows[i].size() != n)
            throw DimensionError("matrix rows have unequal lengths");
        for (std::size_t j = 0; j < n; ++j)
            if (rows[i].get(j)) a.set(i, j, true);
    }
    return a;
}

BinaryMatrix BinaryMatrix::from_columns(const std::vector<BitVector>& cols) {
    std::size_t n = cols.size();
    std::size_t m = n == 0 ? 0 : cols[0].size();
    BinaryMatrix a(m, n);
    for (std::size_t j = 0; j < n; ++j) {
        if (cols[j].size() != m)
            throw DimensionError("matrix columns have unequal lengths");
        for (std::size_t i = 0; i < m; ++i)
            if (cols[j].get(i)) a.set(i, j, true);
    }
    return a;
}

void BinaryMatrix::set(std::size_t i, std::size_t j, bool v) {
    std::uint64_t rmask = std::uint64_t{1} << (j & 63);
    std::uint64_t cmask = std::uint64_t{1} << (i & 63);
    if (v) {
        row_bits_[i * row_words_ + (j >> 6)] |= rmask;
        col_bits_[j * col_words_ + (i >> 6)] |= cmask;
    } else {
        row_bits_[i * row_words_ + (j >> 6)] &= ~rmask;
        col_bits_[j * col_words_ + (i >> 6)] &= ~cmask;
    }
}

void BinaryMatrix::flip(std::size_t i, std::size_t j) {
    row_bits_[i * row_words_ + (j >> 6)] ^= std::uint64_t{1} << (j & 63);
    col_bits_[j * col_words_ + (i >> 6)] ^= std::uint64_t{1} << (i & 63);
}

BitVector BinaryMatrix::row(std::size_t i) const {
    BitVector v(n_);
    for (std::size_t j = 0; j < n_; ++j)
        if (get(i, j)) v.set(j, true);
    return v;
}

BitVector BinaryMatrix::column(std::size_t j) const {
    BitVector v(m_);
    for (std::size_t i = 0; i < m_; ++i)
        if (get(i, j)) v.set(i, true);
    return v;
}

std::vector<BitVector> BinaryMatrix::columns() const {
    std::vector<BitVector> out;
    out.reserve(n_);
    for (std::size_t j = 0; j < n_; ++j) out.push_back(column(j));
    return out;
}

BinaryMatrix BinaryMatrix::transpose() const {
    BinaryMatrix t(n_, m_);
    for (std::size_t i = 0; i < m_; ++i)
        for (std::size_t j = 0; j < n_; ++j)
            if (get(i, j)) t.set(j, i, true);
    return t;
}

BinaryMatrix BinaryMatrix::submatrix(const std::vector<std::size_t>& row_idx,
                                     const std::vector<std::size_t>& col_idx) const {
    BinaryMatrix s(row_idx.size(), col_idx.size());
    for (std::size_t i = 0; i < row_idx.size(); ++i)
        for (std::size_t j = 0; j < col_idx.size(); ++j)
            if (get(row_idx[i], col_idx[j])) s.set(i, j, true);
    return s;
}

BinaryMatrix BinaryMatrix::select_columns(const std::vector<std::size_t>& col_idx) const {
    BinaryMatrix s(m_, col_idx.size());
    for (std::size_t j = 0; j < col_idx.size(); ++j)
        for (std::size_t i = 0; i < m_; ++i)
            if (get(i, col_idx[j])) s.set(i, j, true);
    return s;
}

BinaryMatrix BinaryMatrix::select_rows(const std::vector<std::size_t>& row_idx) const {
    BinaryMatrix s(row_idx.size(), n_);
    for (std::size_t i = 0; i < row_idx.size(); ++i)
        for (std::size_t j = 0; j < n_; ++j)
            if (get(row_idx[i], j)) s.set(i, j, true);
    return s;
}

std::size_t BinaryMatrix::count_ones() const {
    std::size_t total = 0;
    for (std::uint64_t w : row_bits_) total += std::popcount(w);
    return total;
}

bool BinaryMatrix::operator==(const BinaryMatrix& other) const {
    return m_ == other.m_ && n_ == other.n_ && row_bits_ == other.row_bits_;
}

bool IndexPartition::is_valid() const {
    std::vector<char> seen(universe, 0);
    std::size_t covered = 0;
    for (const auto& part : parts) {
        if (part.empty()) return false;
        for (std::size_t i : part) {
            if (i >= universe || seen[i]) return false;
            seen[i] = 1;
            ++covered;
        }
        if (!std::is_sorted(part.begin(), part.end())) return false;
    }
    return covered == universe;
}

std::size_t hamming(const BinaryMatrix& a, const BinaryMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError("hamming distance of matrices with different shapes");
    std::size_t total = 0;
    for (std::size_t i = 0; i < a.rows(); ++i) total += hamming(a.row(i), b.row(i));
    return total;
}

namespace {

// Forward elimination over packed rows. Returns pivot (row, column) pairs
// in the order pivots were found; original row indices are preserved.
std::vector<std::pair<std::size_t, std::size_t>>
eliminate(const BinaryMatrix& a, std::size_t max_pivots) {
    std::size_t m = a.rows(), n = a.cols();
    std::vector<BitVector> work;
    work.reserve(m);
    for (std::size_t i = 0; i < m; ++i) work.push_back(a.row(i));
    std::vector<std::size_t> orig(m);
    for (std::size_t i = 0; i < m; ++i) orig[i] = i;

    std::vector<std::pair<std::size_t, std::size_t>> pivots;
    std::size_t next = 0;
    for (std::size_t col = 0; col < n && next < m && pivots.size() < max_pivots; ++col) {
        std::size_t pivot = m;
        for (std::size_t i = next; i < m; ++i) {
            if (work[i].get(col)) {
                pivot = i;
                break;
            }
        }
        if (pivot == m) continue;
        std::swap(work[pivot], work[next]);
        std::swap(orig[pivot], orig[next]);
        for (std::size_t i = next + 1; i < m; ++i)
            if (work[i].get(col)) work[i].xor_with(work[next]);
        pivots.emplace_back(orig[next], col);
        ++next;
    }
    return pivots;
}

} // namespace

std::size_t gf2_rank(const BinaryMatrix& a) {
    return eliminate(a, a.rows()).size();
}

std::optional<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>>
find_full_rank_submatrix(const BinaryMatrix& a, std::size_t r) {
    auto pivots = eliminate(a, r + 1);
    if (pivots.size() < r + 1) return std::nullopt;
    std::vector<std::size_t> rows, cols;
    for (const auto& [pr, pc] : pivots) {
        rows.push_back(pr);
        cols.push_back(pc);
    }
    std::sort(rows.begin(), rows.end());
    std::sort(cols.begin(), cols.end());
    return std::make_pair(std::move(rows), std::move(cols));
}

BinaryMatrix boolean_product(const BinaryMatrix& u, const BinaryMatrix& v) {
    if (u.cols() != v.rows())
        throw DimensionError("boolean product inner dimensions differ");
    BinaryMatrix b(u.rows(), v.cols());
    for (std::size_t h = 0; h < u.cols(); ++h) {
        for (std::size_t i = 0; i < u.rows(); ++i) {
            if (!u.get(i, h)) continue;
            for (std::size_t j = 0; j < v.cols(); ++j)
                if (v.get(h, j)) b.set(i, j, true);
        }
    }
    return b;
}

namespace {

IndexPartition group_equal(std::size_t count, const std::vector<BitVector>& items) {
    IndexPartition p;
    p.universe = count;
    std::map<BitVector, std::size_t> first_seen;
    for (std::size_t i = 0; i < count; ++i) {
        auto [it, inserted] = first_seen.emplace(items[i], p.parts.size());
        if (inserted)
            p.parts.emplace_back();
        p.parts[it->second].push_back(i);
    }
    // Order groups by smallest member.
    std::sort(p.parts.begin(), p.parts.end(),
              [](const auto& x, const auto& y) { return x.front() < y.front(); });
    return p;
}

} // namespace

IndexPartition column_groups(const BinaryMatrix& a) {
    return group_equal(a.cols(), a.columns());
}

IndexPartition row_groups(const BinaryMatrix& a) {
    std::vector<BitVector> rows;
    rows.reserve(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) rows.push_back(a.row(i));
    return group_equal(a.rows(), rows);
}

std::pair<IndexPartition, IndexPartition> block_partition(const BinaryMatrix& a) {
    return {row_groups(a), column_groups(a)};
}

bool agrees_with(const BitVector& c, const BinaryMatrix& a) {
    if (c.size() != a.rows())
        throw DimensionError("agreeing vector must have one entry per matrix row");
    IndexPartition groups = row_groups(a);
    for (const auto& part : groups.parts) {
        bool v = c.get(part.front());
        for (std::size_t i : part)
            if (c.get(i) != v) return false;
    }
    return true;
}

std::vector<BitVector> enumerate_agreeing_within(const BinaryMatrix& a,
                                                 const BitVector& base,
                                                 std::size_t h) {
    if (base.size() != a.rows())
        throw DimensionError("base vector must have one entry per matrix row");
    IndexPartition groups = row_groups(a);
    std::vector<BitVector> out;
    BitVector current = base;
    // DFS over row groups: flipping group g changes the distance to base by
    // exactly |g|, so prune on remaining budget.
    auto walk = [&](auto&& self, std::size_t g, std::size_t budget) -> void {
        if (g == groups.parts.size()) {
            out.push_back(current);
            return;
        }
        self(self, g + 1, budget);
        const auto& part = groups.parts[g];
        if (part.size() <= budget) {
            for (std::size_t i : part) current.flip(i);
            self(self, g + 1, budget - part.size());
            for (std::size_t i : part) current.flip(i);
        }
    };
    walk(walk, 0, h);
    return out;
}

std::size_t distinct_column_count(const BinaryMatrix& a) {
    return column_groups(a).size();
}

std::size_t distinct_row_count(const BinaryMatrix& a) {
    return row_groups(a).size();
}

} // namespace bma
