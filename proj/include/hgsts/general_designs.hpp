#pragma once

// General (n,q,r) designs: kappa_{q,r}, admissibility, configuration extraction from
// complete Steiner systems, weak sparseness, and the sparsify + matching pipeline.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hgsts/rng.hpp"
#include "hgsts/sparse_check.hpp"
#include "hgsts/triple.hpp"

namespace hgsts {

using Block = std::vector<Vertex>;  // sorted q-subset

/// A q-graph on {0..n-1} with a designated r. Partial Steiner (pairwise intersections <= r-1)
/// is checked by is_partial(), not enforced: the sparsifier's output need not be partial.
struct QSystem {
    int n = 0;
    int q = 0;
    int r = 0;
    std::vector<Block> blocks;  // sorted, unique

    void normalize() {
        for (auto& b : blocks) std::sort(b.begin(), b.end());
        std::sort(blocks.begin(), blocks.end());
        blocks.erase(std::unique(blocks.begin(), blocks.end()), blocks.end());
    }
    void validate() const {
        if (!(q > r && r >= 2)) throw InvalidArgument("qsys: need q > r >= 2");
        if (n < q) throw InvalidArgument("qsys: need n >= q");
        for (const auto& b : blocks) {
            if (static_cast<int>(b.size()) != q) throw InvalidArgument("qsys: block of wrong size");
            for (std::size_t x = 0; x < b.size(); ++x) {
                if (b[x] < 0 || b[x] >= n) throw InvalidArgument("qsys: vertex out of range");
                if (x > 0 && b[x] <= b[x - 1]) throw InvalidArgument("qsys: block not strictly increasing");
            }
        }
    }
    [[nodiscard]] bool is_partial() const {
        std::set<Block> seen;
        bool ok = true;
        for (const auto& b : blocks) {
            for_each_subset(b, r, [&](const Block& e) { ok = ok && seen.insert(e).second; });
        }
        return ok;
    }

    template <class F>
    static void for_each_subset(const Block& b, int size, F&& f) {
        const int m = static_cast<int>(b.size());
        std::vector<int> idx(static_cast<std::size_t>(size));
        for (int x = 0; x < size; ++x) idx[x] = x;
        Block out(static_cast<std::size_t>(size));
        while (true) {
            for (int x = 0; x < size; ++x) out[x] = b[idx[x]];
            f(out);
            int x = size - 1;
            while (x >= 0 && idx[x] == m - size + x) --x;
            if (x < 0) return;
            ++idx[x];
            for (int y = x + 1; y < size; ++y) idx[y] = idx[y - 1] + 1;
        }
    }
};

/// Exact binomial with 128-bit intermediates; throws if the result overflows 64 bits.
inline std::uint64_t binom_exact(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 acc = 1;
    for (std::uint64_t x = 1; x <= k; ++x) {
        acc = acc * (n - k + x) / x;
        if (acc > UINT64_MAX) throw InvalidArgument("binomial overflow");
    }
    return static_cast<std::uint64_t>(acc);
}

inline int kappa_qr(int q, int r, int j) {
    if (!(q > r && r >= 2)) throw InvalidArgument("kappa_qr: need q > r >= 2");
    if (j < r + 1) throw InvalidArgument("kappa_qr: need j >= r+1");
    return (j - r - 1) / (q - r);
}

inline bool admissible(int n, int q, int r) {
    if (!(n >= q && q > r && r >= 2)) throw InvalidArgument("admissible: need n >= q > r >= 2");
    for (int i = 0; i <= r - 1; ++i) {
        if (binom_exact(n - i, r - i) % binom_exact(q - i, r - i) != 0) return false;
    }
    return true;
}

/// The counting step that guarantees an uncovered r-set: x C(q,r) < C((x-1)(q-r)+q+1, r).
inline bool extension_inequality(int q, int r, int x) {
    return static_cast<double>(x) * binom_real(q, r) < binom_real((x - 1) * (q - r) + q + 1, r);
}

/// Largest j with kappa_{q,r}(j) + 2 <= k (0 if none).
inline int weak_j_max(int q, int r, int k) {
    int best = 0;
    for (int j = r + 1; kappa_qr(q, r, j) + 2 <= k; ++j) best = j;
    return best;
}

struct ExtractedConfiguration {
    std::vector<Block> blocks;
    std::vector<Vertex> points;  // the j points, padding included
    int padding = 0;             // points on no block
};

/// Builds kappa_{q,r}(j) blocks of a complete Steiner system on j points by the inductive
/// argument: start from one block plus a point, then repeatedly add the block covering the
/// lexicographically first r-set of the current point set not inside a chosen block.
inline ExtractedConfiguration extract_configuration(const QSystem& S, int j) {
    S.validate();
    const int q = S.q;
    const int r = S.r;
    if (!(S.n >= j && j > q)) throw InvalidArgument("extract_configuration: need n >= j > q");
    std::map<Block, std::size_t> cover;
    for (std::size_t b = 0; b < S.blocks.size(); ++b) {
        QSystem::for_each_subset(S.blocks[b], r, [&](const Block& e) { cover.emplace(e, b); });
    }
    if (S.blocks.empty()) throw InvalidArgument("extract_configuration: system has no blocks");
    const int x_steps = (j - q - 1) / (q - r);
    ExtractedConfiguration out;
    std::set<Vertex> pts(S.blocks[0].begin(), S.blocks[0].end());
    std::set<Block> covered;
    out.blocks.push_back(S.blocks[0]);
    QSystem::for_each_subset(S.blocks[0], r, [&](const Block& e) { covered.insert(e); });
    auto pad_to = [&](std::size_t size) {
        for (Vertex v = 0; static_cast<int>(v) < S.n && pts.size() < size; ++v) pts.insert(v);
    };
    pad_to(static_cast<std::size_t>(q + 1));
    for (int x = 1; x <= x_steps; ++x) {
        const Block support(pts.begin(), pts.end());
        std::optional<Block> fresh;
        QSystem::for_each_subset(support, r, [&](const Block& e) {
            if (!fresh && !covered.count(e)) fresh = e;
        });
        if (!fresh) throw std::logic_error("extract_configuration: no uncovered r-set (counting step failed)");
        auto it = cover.find(*fresh);
        if (it == cover.end()) throw InvalidArgument("extract_configuration: system is not complete");
        const auto& Q = S.blocks[it->second];
        out.blocks.push_back(Q);
        QSystem::for_each_subset(Q, r, [&](const Block& e) { covered.insert(e); });
        pts.insert(Q.begin(), Q.end());
        pad_to(static_cast<std::size_t>(x * (q - r) + q + 1));
    }
    pad_to(static_cast<std::size_t>(j));
    out.points.assign(pts.begin(), pts.end());
    std::set<Vertex> used;
    for (const auto& b : out.blocks) used.insert(b.begin(), b.end());
    out.padding = static_cast<int>(pts.size() - used.size());
    return out;
}

// ---------------------------------------------------------------------------

struct WeakSparsenessReport {
    int k_checked = 0;
    bool ok = true;
    bool exhaustive = true;
    std::uint64_t subsets_examined = 0;
    std::vector<Vertex> witness_vertices;
    std::vector<Block> witness_blocks;
};

namespace detail {

/// Scans every vertex set W with q+1 <= |W| <= j_max for more than kappa_{q,r}(|W|)+1 blocks.
/// Calls on_bad(W) for each violation; stops early when it returns false.
template <class F>
void scan_weak(const QSystem& S, int j_max, std::uint64_t& examined, F&& on_bad) {
    const int n = S.n;
    std::vector<std::vector<Block>> by_last(static_cast<std::size_t>(n));
    for (const auto& b : S.blocks) by_last[b.back()].push_back(Block(b.begin(), b.end() - 1));
    std::vector<char> in(static_cast<std::size_t>(n), 0);
    std::vector<Vertex> chosen;
    bool stop = false;
    for (int w = S.q + 1; w <= j_max && !stop; ++w) {
        const int limit = kappa_qr(S.q, S.r, w) + 1;
        std::function<void(int, int)> dfs = [&](int from, int blocks) {
            if (stop) return;
            if (static_cast<int>(chosen.size()) == w) {
                ++examined;
                if (blocks > limit && !on_bad(chosen)) stop = true;
                return;
            }
            for (int v = from; v <= n - (w - static_cast<int>(chosen.size())) && !stop; ++v) {
                int add = 0;
                for (const auto& rest : by_last[v]) {
                    bool all = true;
                    for (auto u : rest) all = all && in[u];
                    add += all ? 1 : 0;
                }
                in[v] = 1;
                chosen.push_back(v);
                dfs(v + 1, blocks + add);
                chosen.pop_back();
                in[v] = 0;
            }
        };
        dfs(0, 0);
    }
}

inline std::vector<Block> blocks_inside(const QSystem& S, const std::vector<Vertex>& w) {
    std::set<Vertex> ws(w.begin(), w.end());
    std::vector<Block> out;
    for (const auto& b : S.blocks) {
        if (std::all_of(b.begin(), b.end(), [&](Vertex v) { return ws.count(v) > 0; })) out.push_back(b);
    }
    return out;
}

/// Block-side search for the same violations: any violating W contains kappa(|W|)+2 blocks
/// whose union U (|U| <= |W|) is itself violating, so it suffices to grow block sets in index
/// order while the union stays within j_max. Calls on_bad(U) per violating union.
template <class F>
void scan_weak_blocks(const QSystem& S, int j_max, F&& on_bad) {
    const auto& B = S.blocks;
    std::vector<Vertex> uni;
    bool stop = false;
    std::function<void(std::size_t, int)> dfs = [&](std::size_t from, int count) {
        for (std::size_t b = from; b < B.size() && !stop; ++b) {
            std::vector<Vertex> next;
            std::set_union(uni.begin(), uni.end(), B[b].begin(), B[b].end(), std::back_inserter(next));
            if (static_cast<int>(next.size()) > j_max) continue;
            const int u = static_cast<int>(next.size());
            if (count + 1 >= 2 && count + 1 >= kappa_qr(S.q, S.r, u) + 2) {
                if (!on_bad(next)) stop = true;
                continue;
            }
            std::swap(uni, next);
            dfs(b + 1, count + 1);
            std::swap(uni, next);
        }
    };
    if (j_max >= S.q + 1) dfs(0, 0);
}

}  // namespace detail

/// No (j, kappa_{q,r}(j)+2)-configuration with kappa_{q,r}(j)+2 <= k: every j-set with
/// q+1 <= j <= j_max spans at most kappa_{q,r}(j)+1 blocks.
inline WeakSparsenessReport is_weakly_k_sparse(const QSystem& S, int k, double budget = kDefaultSparseBudget) {
    if (k < 2) throw InvalidArgument("is_weakly_k_sparse: k must be at least 2");
    S.validate();
    WeakSparsenessReport rep;
    rep.k_checked = k;
    const int jm = weak_j_max(S.q, S.r, k);
    double cost = 0;
    for (int w = S.q + 1; w <= jm; ++w) cost += binom_real(S.n, w);
    if (cost > budget) {
        throw BudgetExceeded("is_weakly_k_sparse: " + std::to_string(cost) + " subsets exceed the exhaustive budget");
    }
    detail::scan_weak(S, jm, rep.subsets_examined, [&](const std::vector<Vertex>& w) {
        rep.ok = false;
        rep.witness_vertices = w;
        rep.witness_blocks = detail::blocks_inside(S, w);
        return false;
    });
    return rep;
}

/// Randomized evidence for large n: grows vertex sets from random blocks along blocks that
/// add the fewest new points. ok = true is not a proof.
inline WeakSparsenessReport sampled_weak_sparseness(const QSystem& S, int k, std::uint64_t samples, std::uint64_t seed) {
    if (samples < 1) throw InvalidArgument("sampled_weak_sparseness: samples must be positive");
    S.validate();
    WeakSparsenessReport rep;
    rep.k_checked = k;
    rep.exhaustive = false;
    const int jm = weak_j_max(S.q, S.r, k);
    if (S.blocks.empty() || jm < S.q + 1) return rep;
    Rng rng(seed);
    std::vector<std::vector<int>> incident(static_cast<std::size_t>(S.n));
    for (std::size_t b = 0; b < S.blocks.size(); ++b) {
        for (auto v : S.blocks[b]) incident[v].push_back(static_cast<int>(b));
    }
    for (std::uint64_t it = 0; it < samples; ++it) {
        std::set<Vertex> w;
        const auto& b0 = S.blocks[uniform_index(rng, S.blocks.size())];
        w.insert(b0.begin(), b0.end());
        while (static_cast<int>(w.size()) < jm) {
            std::vector<int> best;
            std::size_t best_new = SIZE_MAX;
            for (auto v : w) {
                for (int b : incident[v]) {
                    std::size_t fresh = 0;
                    for (auto u : S.blocks[b]) fresh += w.count(u) ? 0 : 1;
                    if (fresh == 0 || w.size() + fresh > static_cast<std::size_t>(jm)) continue;
                    if (fresh < best_new) {
                        best_new = fresh;
                        best.clear();
                    }
                    if (fresh == best_new) best.push_back(b);
                }
            }
            if (best.empty()) break;
            const auto& add = S.blocks[best[uniform_index(rng, best.size())]];
            w.insert(add.begin(), add.end());
            const std::vector<Vertex> wv(w.begin(), w.end());
            ++rep.subsets_examined;
            const auto inside = detail::blocks_inside(S, wv);
            if (static_cast<int>(wv.size()) >= S.q + 1 &&
                static_cast<int>(inside.size()) > kappa_qr(S.q, S.r, static_cast<int>(wv.size())) + 1) {
                rep.ok = false;
                rep.witness_vertices = wv;
                rep.witness_blocks = inside;
                return rep;
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------

/// The theta condition (q-r-theta)(kappa_{q,r}(j)+2) >= j-r+theta for q+1 <= j <= j_max.
inline bool theta_feasible(int q, int r, int k, double theta) {
    if (!(theta > 0 && theta < q - r)) return false;
    const int jm = weak_j_max(q, r, k);
    for (int j = q + 1; j <= jm; ++j) {
        if ((q - r - theta) * (kappa_qr(q, r, j) + 2) < j - r + theta - 1e-12) return false;
    }
    return true;
}

enum class ResampleMode {
    full,   // redraw the whole q-graph until no B_S event holds
    local,  // redraw only the q-sets inside violating sets, until none remain
};

struct SparsifyOptions {
    double eps_degree = 0.5;
    int budget = 1000;
    ResampleMode mode = ResampleMode::local;
};

struct SparsifyReport {
    double p = 0;
    int rounds = 0;          // full redraws or local resampling rounds used
    std::uint64_t resampled_sets = 0;
    std::size_t blocks = 0;
    std::uint64_t bad_sets_final = 0;          // B_S events left (0 on success)
    std::uint64_t degree_violations = 0;       // r-sets with degree outside (1 +- eps) n^theta/(q-r)!
    std::uint64_t codegree_violations = 0;     // pairs of r-sets with codegree >= n^{theta/10}
    double degree_target = 0;
};

class BudgetExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

template <class F>
void for_each_qset(int n, int q, F&& f) {
    Block b(static_cast<std::size_t>(q));
    for (int x = 0; x < q; ++x) b[x] = x;
    while (true) {
        f(b);
        int x = q - 1;
        while (x >= 0 && b[x] == n - q + x) --x;
        if (x < 0) return;
        ++b[x];
        for (int y = x + 1; y < q; ++y) b[y] = b[y - 1] + 1;
    }
}

}  // namespace detail

/// Random q-graph with each q-set kept with probability n^{-(q-r)+theta}, resampled until no
/// j-set (q+1 <= j <= j_max) spans kappa_{q,r}(j)+2 or more q-sets. Degree and codegree
/// events are measured and reported, not enforced.
inline std::pair<QSystem, SparsifyReport> sparsify(int n, int q, int r, int k, double theta, std::uint64_t seed,
                                                   const SparsifyOptions& opt = {}) {
    if (!(n > q && q > r && r >= 2)) throw InvalidArgument("sparsify: need n > q > r >= 2");
    if (!theta_feasible(q, r, k, theta)) throw InvalidArgument("sparsify: theta violates the feasibility condition");
    if (opt.budget < 1) throw InvalidArgument("sparsify: budget must be positive");
    const int jm = weak_j_max(q, r, k);
    if (binom_real(n, q) > 5e7) throw BudgetExceeded("sparsify: too many q-sets to sample for n");
    Rng rng(seed);
    SparsifyReport rep;
    rep.p = std::pow(static_cast<double>(n), -(q - r) + theta);
    QSystem A{n, q, r, {}};
    auto draw_all = [&]() {
        A.blocks.clear();
        detail::for_each_qset(n, q, [&](const Block& b) {
            if (uniform_real(rng) < rep.p) A.blocks.push_back(b);
        });
    };
    auto bad_sets = [&](std::size_t cap) {
        std::vector<std::vector<Vertex>> bad;
        detail::scan_weak_blocks(A, jm, [&](const std::vector<Vertex>& w) {
            bad.push_back(w);
            return bad.size() < cap;
        });
        return bad;
    };
    draw_all();
    bool clean = false;
    for (rep.rounds = 1; rep.rounds <= opt.budget; ++rep.rounds) {
        auto bad = bad_sets(opt.mode == ResampleMode::full ? 1 : 100000);
        if (bad.empty()) {
            clean = true;
            break;
        }
        if (opt.mode == ResampleMode::full) {
            draw_all();
            continue;
        }
        // Redraw every q-set inside each violating set, one set at a time.
        std::set<Block> current(A.blocks.begin(), A.blocks.end());
        for (const auto& w : bad) {
            ++rep.resampled_sets;
            QSystem::for_each_subset(w, q, [&](const Block& b) {
                current.erase(b);
                if (uniform_real(rng) < rep.p) current.insert(b);
            });
        }
        A.blocks.assign(current.begin(), current.end());
    }
    if (!clean) {
        rep.bad_sets_final = bad_sets(SIZE_MAX).size();
        throw BudgetExhausted("sparsify: resample budget of " + std::to_string(opt.budget) + " exhausted with " +
                              std::to_string(rep.bad_sets_final) + " bad sets left");
    }
    rep.rounds = std::min(rep.rounds, opt.budget);
    rep.blocks = A.blocks.size();
    // Degree and codegree diagnostics.
    rep.degree_target = std::pow(static_cast<double>(n), theta) / std::tgamma(q - r + 1.0);
    std::map<Block, std::uint64_t> deg;
    for (const auto& b : A.blocks) QSystem::for_each_subset(b, r, [&](const Block& e) { ++deg[e]; });
    const double lo = (1 - opt.eps_degree) * rep.degree_target;
    const double hi = (1 + opt.eps_degree) * rep.degree_target;
    std::uint64_t seen = 0;
    for (const auto& [e, d] : deg) {
        ++seen;
        if (d < lo || d > hi) ++rep.degree_violations;
    }
    const auto total_r = binom_exact(n, r);
    if (lo > 0) rep.degree_violations += total_r - seen;  // degree-0 r-sets
    // Codegree of e ∪ e' is the number of blocks containing that set; blocks sharing an
    // (r+1)-set or more give the only candidates.
    const double codeg_cap = std::pow(static_cast<double>(n), theta / 10.0);
    std::map<Block, std::uint64_t> sup;
    for (const auto& b : A.blocks) {
        for (int s = r + 1; s <= std::min(q, 2 * r); ++s) QSystem::for_each_subset(b, s, [&](const Block& u) { ++sup[u]; });
    }
    for (const auto& [u, d] : sup) {
        if (static_cast<double>(d) >= codeg_cap) {
            // Number of unordered pairs {e, e'} of distinct r-sets with e ∪ e' = u.
            std::uint64_t pairs = 0;
            const int s = static_cast<int>(u.size());
            for (int ov = std::max(0, 2 * r - s); ov < r; ++ov) {
                pairs += binom_exact(s, ov) * binom_exact(s - ov, r - ov) * binom_exact(s - r, r - ov);
            }
            rep.codegree_violations += pairs / 2;
        }
    }
    return {A, rep};
}

struct MatchingResult {
    std::vector<Block> blocks;
    std::uint64_t covered_rsets = 0;
    std::uint64_t total_rsets = 0;
    double coverage = 0;
    int passes = 0;
};

/// Randomized greedy matching in the auxiliary hypergraph whose vertices are r-sets and whose
/// edges are the r-subsets of each block: random order, take if disjoint; best of `passes`.
inline MatchingResult greedy_matching(const QSystem& A, int passes, std::uint64_t seed) {
    if (passes < 1) throw InvalidArgument("greedy_matching: passes must be positive");
    A.validate();
    Rng rng(seed);
    MatchingResult best;
    best.total_rsets = binom_exact(A.n, A.r);
    best.passes = passes;
    const auto per_block = binom_exact(A.q, A.r);
    for (int pass = 0; pass < passes; ++pass) {
        std::vector<std::size_t> order(A.blocks.size());
        for (std::size_t x = 0; x < order.size(); ++x) order[x] = x;
        for (std::size_t x = order.size(); x > 1; --x) std::swap(order[x - 1], order[uniform_index(rng, x)]);
        std::set<Block> used;
        std::vector<Block> picked;
        for (auto x : order) {
            const auto& b = A.blocks[x];
            bool free = true;
            QSystem::for_each_subset(b, A.r, [&](const Block& e) { free = free && !used.count(e); });
            if (!free) continue;
            QSystem::for_each_subset(b, A.r, [&](const Block& e) { used.insert(e); });
            picked.push_back(b);
        }
        if (pass == 0 || picked.size() > best.blocks.size()) best.blocks = std::move(picked);
    }
    std::sort(best.blocks.begin(), best.blocks.end());
    best.covered_rsets = best.blocks.size() * per_block;
    best.coverage = static_cast<double>(best.covered_rsets) / static_cast<double>(best.total_rsets);
    return best;
}

struct WeakSparseBuild {
    QSystem system;
    SparsifyReport sparsify;
    MatchingResult matching;
    double target_blocks = 0;  // (1-gamma) C(n,r)/C(q,r)
    bool target_met = false;
};

inline WeakSparseBuild build_weak_sparse(int n, int q, int r, int k, double gamma, double theta, std::uint64_t seed,
                                         const SparsifyOptions& opt = {}, int passes = 20) {
    if (!(gamma > 0 && gamma < 1)) throw InvalidArgument("build_weak_sparse: gamma must lie in (0, 1)");
    WeakSparseBuild out;
    auto [A, srep] = sparsify(n, q, r, k, theta, derive_seed(seed, 0), opt);
    out.sparsify = srep;
    out.matching = greedy_matching(A, passes, derive_seed(seed, 1));
    out.system = QSystem{n, q, r, out.matching.blocks};
    out.system.normalize();
    out.target_blocks = (1 - gamma) * static_cast<double>(binom_exact(n, r)) / static_cast<double>(binom_exact(q, r));
    out.target_met = static_cast<double>(out.system.blocks.size()) >= out.target_blocks;
    return out;
}

// Small complete Steiner systems used as fixtures.
inline QSystem fano_plane() {
    return {7, 3, 2, {{0, 1, 2}, {0, 3, 4}, {0, 5, 6}, {1, 3, 5}, {1, 4, 6}, {2, 3, 6}, {2, 4, 5}}};
}

/// AG(2,3): points (x,y) in Z_3^2 labelled 3x+y, lines as blocks.
inline QSystem affine_plane_3() {
    QSystem s{9, 3, 2, {}};
    for (int a = 0; a < 9; ++a) {
        for (int b = a + 1; b < 9; ++b) {
            const int x = (2 * (a / 3) + 2 * (b / 3)) % 3;  // third point: -(p + q) mod 3 coordinatewise
            const int y = (2 * (a % 3) + 2 * (b % 3)) % 3;
            const int c = 3 * x + y;
            Block blk{a, b, c};
            std::sort(blk.begin(), blk.end());
            s.blocks.push_back(blk);
        }
    }
    s.normalize();
    return s;
}

}  // namespace hgsts
