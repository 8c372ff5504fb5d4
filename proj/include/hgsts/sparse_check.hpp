#pragma once

// Definition-level sparseness checks. Independent of the catalog: a system is
// k-sparse iff every vertex set W with 4 <= |W| <= k+2 spans at most |W|-3 blocks.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "hgsts/rng.hpp"
#include "hgsts/triple.hpp"

namespace hgsts {

inline bool is_linear(const TripleSystem& s) {
    std::set<Pair> seen;
    for (const auto& t : s.blocks()) {
        for (const auto& e : t.pairs()) {
            if (!seen.insert(e).second) return false;
        }
    }
    return true;
}

inline bool is_partial_steiner(const TripleSystem& s) { return is_linear(s); }

struct SparsenessWitness {
    std::vector<Vertex> vertices;
    std::vector<Triple> blocks;
};

struct SparsenessReport {
    int k_checked = 0;
    bool ok = true;
    bool exhaustive = true;
    std::uint64_t subsets_examined = 0;
    std::optional<SparsenessWitness> witness;
};

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kDefaultSparseBudget = 2e8;

namespace detail {

class SubsetScan {
public:
    SubsetScan(const TripleSystem& s, int size) : s_(s), size_(size) {
        points_ = s.points();
        index_.assign(static_cast<std::size_t>(s.n()), -1);
        for (std::size_t i = 0; i < points_.size(); ++i) index_[points_[i]] = static_cast<int>(i);
        // Blocks keyed by their largest point index so each is counted when its last vertex joins.
        by_last_.resize(points_.size());
        for (const auto& t : s.blocks()) {
            std::array<int, 3> ix{index_[t.a], index_[t.b], index_[t.c]};
            std::sort(ix.begin(), ix.end());
            by_last_[ix[2]].push_back({ix[0], ix[1]});
        }
        in_.assign(points_.size(), 0);
    }

    std::optional<SparsenessWitness> run(std::uint64_t& examined) {
        examined_ = &examined;
        if (dfs(0, 0)) return witness_;
        return std::nullopt;
    }

private:
    bool dfs(int from, int blocks) {
        const int depth = static_cast<int>(chosen_.size());
        if (depth == size_) {
            ++*examined_;
            if (blocks > size_ - 3) {
                SparsenessWitness w;
                for (int i : chosen_) w.vertices.push_back(points_[i]);
                w.blocks = s_.induced(w.vertices);
                witness_ = w;
                return true;
            }
            return false;
        }
        const int np = static_cast<int>(points_.size());
        for (int v = from; v <= np - (size_ - depth); ++v) {
            int add = 0;
            for (const auto& [x, y] : by_last_[v]) add += in_[x] & in_[y];
            in_[v] = 1;
            chosen_.push_back(v);
            const bool hit = dfs(v + 1, blocks + add);
            chosen_.pop_back();
            in_[v] = 0;
            if (hit) return true;
        }
        return false;
    }

    const TripleSystem& s_;
    int size_;
    std::vector<Vertex> points_;
    std::vector<int> index_;
    std::vector<std::vector<std::pair<int, int>>> by_last_;
    std::vector<int> in_;
    std::vector<int> chosen_;
    std::uint64_t* examined_ = nullptr;
    std::optional<SparsenessWitness> witness_;
};

}  // namespace detail

/// Exhaustive scan; the reported witness has the smallest violating |W|.
inline SparsenessReport is_k_sparse(const TripleSystem& s, int k, double budget = kDefaultSparseBudget) {
    if (k < 2) throw InvalidArgument("is_k_sparse: k must be at least 2");
    SparsenessReport rep;
    rep.k_checked = k;
    const auto np = static_cast<double>(s.points().size());
    double cost = 0;
    for (int w = 4; w <= k + 2; ++w) cost += binom_real(np, w);
    if (cost > budget) {
        throw BudgetExceeded("is_k_sparse: " + std::to_string(cost) +
                             " subsets exceed the exhaustive budget; use sampled mode");
    }
    for (int w = 4; w <= k + 2; ++w) {
        detail::SubsetScan scan(s, w);
        if (auto wit = scan.run(rep.subsets_examined)) {
            rep.ok = false;
            rep.witness = std::move(wit);
            return rep;
        }
    }
    return rep;
}

/// Randomized evidence of sparseness: uniform (k+2)-subsets plus unions of intersecting
/// blocks grown from a random anchor block. ok = true is not a proof.
inline SparsenessReport sampled_sparseness(const TripleSystem& s, int k, std::uint64_t samples,
                                           std::uint64_t seed) {
    if (samples < 1) throw InvalidArgument("sampled_sparseness: samples must be positive");
    if (k < 2) throw InvalidArgument("sampled_sparseness: k must be at least 2");
    SparsenessReport rep;
    rep.k_checked = k;
    rep.exhaustive = false;
    const auto& blocks = s.blocks();
    const auto points = s.points();
    if (blocks.empty()) return rep;
    Rng rng(seed);
    std::vector<std::vector<int>> incident(static_cast<std::size_t>(s.n()));
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        for (auto v : blocks[b].vertices()) incident[v].push_back(static_cast<int>(b));
    }
    std::vector<char> in(static_cast<std::size_t>(s.n()), 0);
    auto check = [&](const std::vector<Vertex>& w) {
        ++rep.subsets_examined;
        if (w.size() < 4) return false;
        const auto inside = s.induced(w);
        if (static_cast<int>(inside.size()) > static_cast<int>(w.size()) - 3) {
            SparsenessWitness wit;
            wit.vertices = w;
            std::sort(wit.vertices.begin(), wit.vertices.end());
            wit.blocks = inside;
            rep.ok = false;
            rep.witness = std::move(wit);
            return true;
        }
        return false;
    };
    const int wmax = k + 2;
    for (std::uint64_t iter = 0; iter < samples; ++iter) {
        std::vector<Vertex> w;
        if (iter % 2 == 1 && static_cast<int>(points.size()) >= wmax) {
            // Uniform subset of the points.
            std::vector<Vertex> pool(points);
            for (int x = 0; x < wmax; ++x) {
                const auto pick = x + uniform_index(rng, pool.size() - x);
                std::swap(pool[x], pool[pick]);
                w.push_back(pool[x]);
            }
            if (check(w)) return rep;
            continue;
        }
        // Anchored growth along intersecting blocks, biased toward blocks adding few points.
        const auto& t0 = blocks[uniform_index(rng, blocks.size())];
        for (auto v : t0.vertices()) {
            w.push_back(v);
            in[v] = 1;
        }
        bool found = false;
        while (static_cast<int>(w.size()) < wmax + 1) {
            std::vector<int> cand;
            int best_new = 4;
            std::vector<int> best;
            for (auto v : w) {
                for (int b : incident[v]) {
                    const auto& t = blocks[b];
                    const int fresh = int(!in[t.a]) + int(!in[t.b]) + int(!in[t.c]);
                    if (fresh == 0 || static_cast<int>(w.size()) + fresh > wmax) continue;
                    cand.push_back(b);
                    if (fresh < best_new) {
                        best_new = fresh;
                        best.clear();
                    }
                    if (fresh == best_new) best.push_back(b);
                }
            }
            if (cand.empty()) break;
            const auto& pool = uniform_real(rng) < 0.5 ? best : cand;
            const auto& t = blocks[pool[uniform_index(rng, pool.size())]];
            for (auto v : t.vertices()) {
                if (!in[v]) {
                    in[v] = 1;
                    w.push_back(v);
                }
            }
            if (check(w)) {
                found = true;
                break;
            }
        }
        for (auto v : w) in[v] = 0;
        if (found) return rep;
    }
    return rep;
}

}  // namespace hgsts
