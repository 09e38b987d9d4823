#include "bma/reductions.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "bma/errors.hpp"

namespace bma {

void CsoInstance::validate() const {
    if (r == 0 || r > strings.size())
        throw UsageError("selection size must be between 1 and the string count");
    for (const auto& s : strings)
        if (s.size() != len) throw UsageError("all strings must have length len");
}

bool CsoWitness::is_witness(const CsoInstance& inst) const {
    if (chosen.size() != inst.r) return false;
    std::vector<char> seen(inst.strings.size(), 0);
    std::size_t total = 0;
    for (std::size_t i : chosen) {
        if (i >= inst.strings.size() || seen[i]) return false;
        seen[i] = 1;
        total += hamming(center, inst.strings[i]);
    }
    return total <= inst.d;
}

namespace {

// Marker suffix for slot i of t: blocks of length d+1, block i all ones.
BitVector marker(std::size_t i, std::size_t t, std::size_t d) {
    BitVector m((d + 1) * t);
    for (std::size_t b = 0; b < d + 1; ++b) m.set(i * (d + 1) + b, true);
    return m;
}

BitVector concat(const BitVector& head, const BitVector& tail) {
    BitVector out(head.size() + tail.size());
    for (std::size_t i = 0; i < head.size(); ++i)
        if (head.get(i)) out.set(i, true);
    for (std::size_t i = 0; i < tail.size(); ++i)
        if (tail.get(i)) out.set(head.size() + i, true);
    return out;
}

} // namespace

CsoInstance compose_cso(const std::vector<CsoInstance>& instances) {
    if (instances.empty()) throw UsageError("composition needs at least one instance");
    const CsoInstance& first = instances[0];
    for (const auto& inst : instances) {
        inst.validate();
        if (inst.len != first.len || inst.r != first.r || inst.d != first.d)
            throw UsageError("composed instances must share len, r and d");
    }
    std::size_t t = instances.size();
    CsoInstance out;
    out.len = first.len + (first.d + 1) * t;
    out.r = first.r;
    out.d = first.d;
    for (std::size_t i = 0; i < t; ++i) {
        BitVector suffix = marker(i, t, first.d);
        for (const auto& s : instances[i].strings)
            out.strings.push_back(concat(s, suffix));
    }
    return out;
}

MeansInstance reduce_cso_to_means(const CsoInstance& cso) {
    cso.validate();
    if (cso.r > cso.d)
        throw UsageError("the reduction is only proven for r <= d");
    std::size_t n = cso.strings.size();
    std::vector<BitVector> cols;
    cols.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        cols.push_back(concat(cso.strings[i], marker(i, n, cso.d)));
    MeansInstance out;
    out.a = BinaryMatrix::from_columns(cols);
    out.r = n - cso.r + 1;
    out.k = (cso.d + 1) * cso.r + cso.d;
    return out;
}

std::optional<CsoWitness> oracle_cso(const CsoInstance& inst) {
    inst.validate();
    std::size_t n = inst.strings.size();

    auto greedy_for = [&](const BitVector& center) {
        std::vector<std::pair<std::size_t, std::size_t>> dist;
        dist.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
            dist.emplace_back(hamming(center, inst.strings[i]), i);
        std::sort(dist.begin(), dist.end());
        CsoWitness w;
        w.center = center;
        for (std::size_t i = 0; i < inst.r; ++i) {
            w.cost += dist[i].first;
            w.chosen.push_back(dist[i].second);
        }
        std::sort(w.chosen.begin(), w.chosen.end());
        return w;
    };

    std::optional<CsoWitness> best;
    auto consider = [&](const BitVector& center) {
        CsoWitness w = greedy_for(center);
        if (!best || w.cost < best->cost) best = std::move(w);
    };

    if (inst.r >= inst.d + 1) {
        // Selecting r > d strings within budget d forces the center to be
        // one of them.
        for (const auto& s : inst.strings) consider(s);
    } else {
        if (inst.len > 20)
            throw ResourceLimitError("CSO center enumeration beyond the guard");
        for (std::uint64_t code = 0; code < (std::uint64_t{1} << inst.len); ++code) {
            BitVector center(inst.len);
            for (std::size_t i = 0; i < inst.len; ++i)
                if ((code >> i) & 1u) center.set(i, true);
            consider(center);
        }
    }
    if (best && best->cost <= inst.d) return best;
    return std::nullopt;
}

} // namespace bma
