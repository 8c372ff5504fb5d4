#pragma once

// The k-sparse random removal process. Available triples live in a dense rank
// array with an index map (O(1) uniform draws and swap-removal); chosen blocks
// are indexed by pair (at most one block per pair, by linearity) and by vertex.
// Exclusions are found by rooted embedding of catalog entries.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "hgsts/configs.hpp"
#include "hgsts/rng.hpp"
#include "hgsts/triple.hpp"

namespace hgsts {

struct StepReport {
    std::int64_t i = 0;
    Triple selected;
    std::vector<Triple> excluded;  // sorted
    std::size_t available_after = 0;
};

/// Dangerous configurations at a triple T, grouped by their unique available block.
struct DangerProfile {
    struct Entry {
        Triple other;                 // the available block T'
        std::uint64_t total = 0;      // z_{T'}: configurations of any size
        std::uint64_t diamonds = 0;   // of which diamonds
        std::map<int, std::uint64_t> by_j;
    };
    std::vector<Entry> entries;  // sorted by `other`

    [[nodiscard]] std::uint64_t count_j(int j) const {
        std::uint64_t s = 0;
        for (const auto& e : entries) {
            auto it = e.by_j.find(j);
            if (it != e.by_j.end()) s += it->second;
        }
        return s;
    }
    [[nodiscard]] std::uint64_t total() const {
        std::uint64_t s = 0;
        for (const auto& e : entries) s += e.total;
        return s;
    }
    /// Pairs of distinct dangerous configurations sharing their available block.
    [[nodiscard]] std::uint64_t doubles() const {
        std::uint64_t s = 0;
        for (const auto& e : entries) s += e.total * (e.total - 1) / 2;
        return s;
    }
    [[nodiscard]] const Entry* find(const Triple& t) const {
        auto it = std::lower_bound(entries.begin(), entries.end(), t,
                                   [](const Entry& e, const Triple& x) { return e.other < x; });
        return it != entries.end() && it->other == t ? &*it : nullptr;
    }
};

class ProcessState {
public:
    static constexpr int kMaxN = 1000;

    ProcessState(int n, int k, std::uint64_t seed, std::shared_ptr<const ErdosCatalog> catalog)
        : n_(n), k_(k), catalog_(std::move(catalog)), rng_(seed) {
        if (!catalog_) throw InvalidArgument("process: catalog required");
        if (n < 6) throw InvalidArgument("process: n must be at least 6");
        if (n > kMaxN) throw InvalidArgument("process: n above the supported maximum " + std::to_string(kMaxN));
        if (k < 2) throw InvalidArgument("process: k must be at least 2");
        if (k + 2 > catalog_->j_max()) {
            throw InvalidArgument("process: k+2 = " + std::to_string(k + 2) + " exceeds catalog jmax " +
                                  std::to_string(catalog_->j_max()));
        }
        const auto total = binom(n, 3);
        avail_.resize(total);
        pos_.resize(total);
        for (std::uint32_t r = 0; r < total; ++r) {
            avail_[r] = r;
            pos_[r] = static_cast<std::int32_t>(r);
        }
        pair_block_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), -1);
        vertex_blocks_.resize(static_cast<std::size_t>(n));
        uncovered_ = binom(n, 2);
    }

    [[nodiscard]] int n() const { return n_; }
    [[nodiscard]] int k() const { return k_; }
    [[nodiscard]] int j_max() const { return k_ + 2; }
    [[nodiscard]] std::int64_t i() const { return static_cast<std::int64_t>(chosen_.size()); }
    [[nodiscard]] const ErdosCatalog& catalog() const { return *catalog_; }
    [[nodiscard]] std::size_t available_count() const { return avail_.size(); }
    [[nodiscard]] std::uint64_t uncovered_count() const { return uncovered_; }
    [[nodiscard]] const std::vector<Triple>& chosen_list() const { return chosen_; }
    [[nodiscard]] TripleSystem chosen() const { return {n_, chosen_}; }
    [[nodiscard]] Rng& rng() { return rng_; }

    [[nodiscard]] bool is_available(const Triple& t) const { return pos_[triple_rank(t)] >= 0; }
    [[nodiscard]] bool is_chosen(const Triple& t) const {
        const int b = pair_block_[pair_index(Pair{t.a, t.b}, n_)];
        return b >= 0 && chosen_[b] == t;
    }
    [[nodiscard]] bool is_covered(Pair e) const { return pair_block_[pair_index(e, n_)] >= 0; }
    /// Index into chosen_list() of the block through e, or -1.
    [[nodiscard]] int block_through(Pair e) const { return pair_block_[pair_index(e, n_)]; }
    [[nodiscard]] const std::vector<int>& blocks_at(Vertex v) const { return vertex_blocks_[v]; }

    [[nodiscard]] std::vector<Triple> available_list() const {
        std::vector<Triple> out;
        out.reserve(avail_.size());
        for (auto r : avail_) out.push_back(triple_unrank(r));
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Available triples T != t_star that close an Erdős configuration on <= j_max points
    /// together with t_star and chosen blocks. Sorted.
    [[nodiscard]] std::vector<Triple> excluded_by(const Triple& t_star) const {
        require_available(t_star, "excluded_by");
        std::vector<std::uint32_t> found;
        for_each_danger(t_star, [&](const Triple& other, const ErdosEntry*, std::uint64_t) {
            found.push_back(triple_rank(other));
        });
        std::sort(found.begin(), found.end());
        found.erase(std::unique(found.begin(), found.end()), found.end());
        std::vector<Triple> out;
        out.reserve(found.size());
        for (auto r : found) out.push_back(triple_unrank(r));
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Available T* with T <-> T*. The relation is symmetric, so this is the same search anchored at T.
    [[nodiscard]] std::vector<Triple> threats_of(const Triple& t) const {
        require_available(t, "threats_of");
        return excluded_by(t);
    }

    /// Dangerous configurations at available T (exactly one other block available, rest chosen),
    /// counted as distinct block sets.
    [[nodiscard]] DangerProfile danger_profile(const Triple& t) const {
        require_available(t, "danger_profile");
        // Weighted embedding counts per (T', entry); dividing by |Aut| gives configurations.
        std::map<std::pair<std::uint32_t, const ErdosEntry*>, std::uint64_t> raw;
        for_each_danger(t, [&](const Triple& other, const ErdosEntry* e, std::uint64_t weight) {
            raw[{triple_rank(other), e}] += weight;
        });
        std::map<std::uint32_t, DangerProfile::Entry> merged;
        for (const auto& [key, w] : raw) {
            auto& ent = merged[key.first];
            ent.other = triple_unrank(key.first);
            const int j = key.second == nullptr ? 4 : key.second->j;
            const std::uint64_t aut = key.second == nullptr ? 1 : key.second->aut;
            if (w % aut != 0) throw std::logic_error("danger_profile: embedding count not divisible by |Aut|");
            ent.by_j[j] += w / aut;
        }
        DangerProfile prof;
        for (auto& [r, ent] : merged) {
            for (auto& [j, w] : ent.by_j) ent.total += w;
            ent.diamonds = ent.by_j.count(4) ? ent.by_j[4] : 0;
            prof.entries.push_back(ent);
        }
        std::sort(prof.entries.begin(), prof.entries.end(),
                  [](const auto& x, const auto& y) { return x.other < y.other; });
        return prof;
    }

    /// X_{T,j,c}: Erdős configurations on j points through T whose other blocks are c chosen
    /// and j-3-c available. For c = j-4 this uses the dangerous-configuration search.
    [[nodiscard]] std::uint64_t count_configurations(const Triple& t, int j, int c) const {
        if (j < 4 || j > j_max()) throw InvalidArgument("count_configurations: j out of range");
        if (c < 0 || c > j - 4) throw InvalidArgument("count_configurations: c out of range");
        if (j == 4) {
            std::uint64_t cnt = 0;
            for (const auto& e : t.pairs()) {
                for (Vertex w = 0; w < n_; ++w) {
                    if (!t.contains(w) && is_available(Triple{e.a, e.b, w})) ++cnt;
                }
            }
            return cnt;
        }
        std::uint64_t total = 0;
        for (const auto* e : catalog_->entries_for(j)) {
            std::uint64_t emb = 0;
            for (const auto& plan : e->root_plans) {
                std::uint64_t here = 0;
                Embedder em(*this, *e, plan.order);
                em.run_rooted(plan.root, t, c, j - 3 - c, [&](const Vertex*) { ++here; });
                emb += plan.weight * here;
            }
            total += emb / e->aut;
        }
        return total;
    }

    /// The configurations counted by count_configurations(t, j, c), each as a sorted block list.
    [[nodiscard]] std::vector<std::vector<Triple>> configurations(const Triple& t, int j, int c) const {
        if (j < 4 || j > j_max()) throw InvalidArgument("configurations: j out of range");
        if (c < 0 || c > j - 4) throw InvalidArgument("configurations: c out of range");
        std::set<std::vector<Triple>> out;
        if (j == 4) {
            for (const auto& e : t.pairs()) {
                for (Vertex w = 0; w < n_; ++w) {
                    if (t.contains(w)) continue;
                    const Triple other{e.a, e.b, w};
                    if (is_available(other)) out.insert(std::vector<Triple>{std::min(t, other), std::max(t, other)});
                }
            }
            return {out.begin(), out.end()};
        }
        for (const auto* e : catalog_->entries_for(j)) {
            for (const auto& plan : e->root_plans) {
                Embedder em(*this, *e, plan.order);
                em.run_rooted(plan.root, t, c, j - 3 - c, [&](const Vertex* img) {
                    std::vector<Triple> blocks;
                    for (const auto& b : e->config.blocks()) {
                        blocks.emplace_back(img[b.a], img[b.b], img[b.c]);
                    }
                    std::sort(blocks.begin(), blocks.end());
                    out.insert(std::move(blocks));
                });
            }
        }
        return {out.begin(), out.end()};
    }

    /// One step of the process: uniform T*, remove T* and its exclusions, choose T*.
    StepReport step() {
        if (avail_.empty()) throw std::logic_error("step: no available triples (process terminated)");
        const auto idx = uniform_index(rng_, avail_.size());
        return select(triple_unrank(avail_[idx]));
    }

    /// A step with a prescribed T* (used to plant configurations).
    StepReport select(const Triple& t_star) {
        require_available(t_star, "select");
        StepReport rep;
        rep.i = i();
        rep.selected = t_star;
        rep.excluded = excluded_by(t_star);
        remove_available(triple_rank(t_star));
        for (const auto& t : rep.excluded) remove_available(triple_rank(t));
        const int b = static_cast<int>(chosen_.size());
        chosen_.push_back(t_star);
        for (const auto& e : t_star.pairs()) pair_block_[pair_index(e, n_)] = b;
        for (auto v : t_star.vertices()) vertex_blocks_[v].push_back(b);
        uncovered_ -= 3;
        rep.available_after = avail_.size();
        return rep;
    }

    /// Full invariant audit (O(C(n,3))); throws std::logic_error naming the first failure.
    void check_invariants() const {
        if (uncovered_ != binom(n_, 2) - 3 * chosen_.size()) throw std::logic_error("invariant: |E(i)| != C(n,2)-3i");
        std::uint64_t covered_pairs = 0;
        for (Vertex a = 0; a < n_; ++a) {
            for (Vertex b = a + 1; b < n_; ++b) covered_pairs += is_covered(Pair{a, b}) ? 1 : 0;
        }
        if (covered_pairs != 3 * chosen_.size()) throw std::logic_error("invariant: chosen system is not linear");
        for (std::size_t x = 0; x < avail_.size(); ++x) {
            if (pos_[avail_[x]] != static_cast<std::int32_t>(x)) throw std::logic_error("invariant: index map broken");
            const auto t = triple_unrank(avail_[x]);
            if (is_chosen(t)) throw std::logic_error("invariant: triple both available and chosen");
            for (const auto& e : t.pairs()) {
                if (is_covered(e)) throw std::logic_error("invariant: available triple with covered pair");
            }
        }
        std::size_t present = 0;
        for (auto p : pos_) present += p >= 0 ? 1 : 0;
        if (present != avail_.size()) throw std::logic_error("invariant: index map size mismatch");
    }

private:
    friend class Embedder;

    // Rooted backtracking embedding of one catalog entry into the host.
    class Embedder {
    public:
        Embedder(const ProcessState& st, const ErdosEntry& e, const std::vector<int>& order)
            : st_(st), e_(e), order_(order) {
            img_.assign(static_cast<std::size_t>(e.j), -1);
        }

        // Maps `root` onto anchor in all 6 ways, then fills `order` with exactly
        // `chosen_budget` chosen and `avail_budget` available images.
        template <class F>
        void run_rooted(int root, const Triple& anchor, int chosen_budget, int avail_budget, F&& on_complete) {
            const auto& rt = e_.config.blocks()[root];
            std::array<Vertex, 3> cfg{rt.a, rt.b, rt.c};
            std::array<Vertex, 3> host{anchor.a, anchor.b, anchor.c};
            std::sort(host.begin(), host.end());
            do {
                for (int x = 0; x < 3; ++x) bind(cfg[x], host[x]);
                dfs(0, chosen_budget, avail_budget, on_complete);
                for (int x = 0; x < 3; ++x) unbind(cfg[x]);
            } while (std::next_permutation(host.begin(), host.end()));
        }

    private:
        [[nodiscard]] bool used(Vertex h) const {
            for (auto v : mapped_) {
                if (v == h) return true;
            }
            return false;
        }
        void bind(Vertex cfg, Vertex h) {
            img_[cfg] = h;
            mapped_.push_back(h);
        }
        void unbind(Vertex cfg) {
            mapped_.erase(std::find(mapped_.begin(), mapped_.end(), img_[cfg]));
            img_[cfg] = -1;
        }

        // Tries to bind the unmapped config vertices `free` (in order) to `hosts`.
        template <class Next>
        void try_bind(const std::array<Vertex, 3>& cfg, int nfree, const std::array<Vertex, 3>& hosts, Next&& next) {
            for (int x = 0; x < nfree; ++x) {
                if (used(hosts[x])) {
                    for (int y = 0; y < x; ++y) unbind(cfg[y]);
                    return;
                }
                bind(cfg[x], hosts[x]);
                // Distinct hosts within this call are guaranteed by the caller.
            }
            next();
            for (int x = nfree - 1; x >= 0; --x) unbind(cfg[x]);
        }

        template <class F>
        void dfs(std::size_t depth, int cb, int ab, F& on_complete) {
            if (depth == order_.size()) {
                on_complete(img_.data());
                return;
            }
            const auto& slot = e_.config.blocks()[order_[depth]];
            std::array<Vertex, 3> mapped_cfg{};
            std::array<Vertex, 3> free_cfg{};
            int nm = 0;
            int nf = 0;
            for (auto v : slot.vertices()) {
                if (img_[v] >= 0) mapped_cfg[nm++] = v;
                else free_cfg[nf++] = v;
            }
            const int n = st_.n_;
            auto recurse_c = [&] { dfs(depth + 1, cb - 1, ab, on_complete); };
            auto recurse_a = [&] { dfs(depth + 1, cb, ab - 1, on_complete); };
            if (cb > 0) {
                if (nm >= 2) {
                    const int b = st_.block_through(Pair{img_[mapped_cfg[0]], img_[mapped_cfg[1]]});
                    if (b >= 0) {
                        const auto& h = st_.chosen_[b];
                        if (nm == 3) {
                            if (h == Triple{img_[mapped_cfg[0]], img_[mapped_cfg[1]], img_[mapped_cfg[2]]}) recurse_c();
                        } else {
                            const Vertex third = h.third(Pair{img_[mapped_cfg[0]], img_[mapped_cfg[1]]});
                            try_bind(free_cfg, 1, {third, 0, 0}, recurse_c);
                        }
                    }
                } else if (nm == 1) {
                    const Vertex anchor = img_[mapped_cfg[0]];
                    for (int b : st_.vertex_blocks_[anchor]) {
                        const auto& h = st_.chosen_[b];
                        std::array<Vertex, 2> rest{};
                        int r = 0;
                        for (auto v : h.vertices()) {
                            if (v != anchor) rest[r++] = v;
                        }
                        try_bind(free_cfg, 2, {rest[0], rest[1], 0}, recurse_c);
                        try_bind(free_cfg, 2, {rest[1], rest[0], 0}, recurse_c);
                    }
                } else {
                    for (const auto& h : st_.chosen_) {
                        std::array<Vertex, 3> hv{h.a, h.b, h.c};
                        do {
                            try_bind(free_cfg, 3, hv, recurse_c);
                        } while (std::next_permutation(hv.begin(), hv.end()));
                    }
                }
            }
            if (ab > 0) {
                if (nm == 3) {
                    if (st_.is_available(Triple{img_[mapped_cfg[0]], img_[mapped_cfg[1]], img_[mapped_cfg[2]]})) recurse_a();
                } else if (nm == 2) {
                    const Vertex x = img_[mapped_cfg[0]];
                    const Vertex y = img_[mapped_cfg[1]];
                    if (st_.is_covered(Pair{x, y})) return;
                    for (Vertex h = 0; h < n; ++h) {
                        if (h == x || h == y || used(h)) continue;
                        if (st_.is_available(Triple{x, y, h})) try_bind(free_cfg, 1, {h, 0, 0}, recurse_a);
                    }
                } else if (nm == 1) {
                    const Vertex x = img_[mapped_cfg[0]];
                    for (Vertex a = 0; a < n; ++a) {
                        if (a == x || used(a) || st_.is_covered(Pair{x, a})) continue;
                        for (Vertex b = a + 1; b < n; ++b) {
                            if (b == x || used(b)) continue;
                            if (!st_.is_available(Triple{x, a, b})) continue;
                            try_bind(free_cfg, 2, {a, b, 0}, recurse_a);
                            try_bind(free_cfg, 2, {b, a, 0}, recurse_a);
                        }
                    }
                } else {
                    for (auto r : st_.avail_) {
                        const auto h = triple_unrank(r);
                        std::array<Vertex, 3> hv{h.a, h.b, h.c};
                        do {
                            try_bind(free_cfg, 3, hv, recurse_a);
                        } while (std::next_permutation(hv.begin(), hv.end()));
                    }
                }
            }
        }

        const ProcessState& st_;
        const ErdosEntry& e_;
        const std::vector<int>& order_;
        std::vector<Vertex> img_;
        std::vector<Vertex> mapped_;
    };

    void require_available(const Triple& t, const char* what) const {
        if (!t.valid() || t.c >= n_ || !is_available(t)) {
            throw InvalidArgument(std::string(what) + ": triple is not available");
        }
    }

    // Calls f(T', entry, weight) once per rooted embedding of a dangerous configuration at
    // `anchor` with available block T'. Weights are orbit sizes, so summing them per entry and
    // dividing by |Aut| counts distinct configurations. Diamonds come once each with entry null.
    template <class F>
    void for_each_danger(const Triple& anchor, F&& f) const {
        for (const auto& e : anchor.pairs()) {
            const Vertex o = anchor.third(e);
            for (Vertex w = 0; w < n_; ++w) {
                if (w == e.a || w == e.b || w == o) continue;
                const Triple t{e.a, e.b, w};
                if (is_available(t)) f(t, nullptr, 1);
            }
        }
        for (int j = 6; j <= j_max(); ++j) {
            for (const auto* entry : catalog_->entries_for(j)) {
                for (const auto& plan : entry->pair_plans) {
                    Embedder em(*this, *entry, plan.order);
                    const auto& fs = entry->config.blocks()[plan.free];
                    em.run_rooted(plan.root, anchor, static_cast<int>(plan.order.size()), 0, [&](const Vertex* img) {
                        const Triple t{img[fs.a], img[fs.b], img[fs.c]};
                        if (is_available(t)) f(t, entry, plan.weight);
                    });
                }
            }
        }
    }

    void remove_available(std::uint32_t r) {
        const auto p = pos_[r];
        if (p < 0) return;
        const auto last = avail_.back();
        avail_[p] = last;
        pos_[last] = p;
        avail_.pop_back();
        pos_[r] = -1;
    }

    int n_;
    int k_;
    std::shared_ptr<const ErdosCatalog> catalog_;
    Rng rng_;
    std::vector<std::uint32_t> avail_;
    std::vector<std::int32_t> pos_;
    std::vector<Triple> chosen_;
    std::vector<std::int32_t> pair_block_;
    std::vector<std::vector<int>> vertex_blocks_;
    std::uint64_t uncovered_ = 0;
};

/// Reference exclusion set straight from the definition: for each available T, search vertex
/// sets W containing T and T* for chosen blocks that complete an Erdős configuration on W.
inline std::vector<Triple> brute_excluded_by(const ProcessState& st, const Triple& t_star) {
    if (st.n() > 14) throw InvalidArgument("brute_excluded_by: n must be at most 14");
    if (!st.is_available(t_star)) throw InvalidArgument("brute_excluded_by: triple is not available");
    const int n = st.n();
    const int jmax = st.j_max();
    const auto chosen = st.chosen();
    std::vector<Triple> out;
    for (const auto& t : st.available_list()) {
        if (t == t_star) continue;
        std::uint32_t base = 0;
        for (auto v : t.vertices()) base |= 1u << v;
        for (auto v : t_star.vertices()) base |= 1u << v;
        bool hit = false;
        // Supersets W of T ∪ T* with |W| <= j_max: submasks of the complement, added to base.
        const std::uint32_t rest = ((1u << n) - 1u) & ~base;
        bool done = false;
        for (std::uint32_t extra = rest; !done && !hit; done = extra == 0, extra = (extra - 1) & rest) {
            const std::uint32_t w = base | extra;
            const int ws = std::popcount(w);
            if (ws > jmax) continue;
            std::vector<Vertex> wv;
            for (int v = 0; v < n; ++v) {
                if (w >> v & 1u) wv.push_back(v);
            }
            const auto inside = chosen.induced(wv);
            const int need = ws - 4;
            const int m = static_cast<int>(inside.size());
            if (need > m) continue;
            // Every need-subset of chosen blocks inside W.
            std::vector<int> pick(static_cast<std::size_t>(need));
            std::function<void(int, int)> rec = [&](int from, int d) {
                if (hit) return;
                if (d == need) {
                    std::vector<Triple> blocks{t, t_star};
                    for (int x : pick) blocks.push_back(inside[x]);
                    TripleSystem s{n, blocks};
                    if (static_cast<int>(s.points().size()) == ws && is_erdos(s).erdos) hit = true;
                    return;
                }
                for (int x = from; x < m; ++x) {
                    pick[d] = x;
                    rec(x + 1, d + 1);
                }
            };
            rec(0, 0);
        }
        if (hit) out.push_back(t);
    }
    return out;
}

struct StopCondition {
    std::int64_t max_steps = -1;        // stop once i reaches this (-1: none)
    double max_seconds = -1;            // wall-clock budget (-1: none)
};

struct RunSummary {
    std::int64_t steps = 0;
    bool exhausted = false;  // available set became empty
    std::size_t available_left = 0;
    std::uint64_t uncovered_left = 0;
    double seconds = 0;
};

/// Steps until the available set is empty or the stop condition fires. `before_step`
/// (optional) sees the state before each step; `journal` (optional) receives one line per step.
inline RunSummary run(ProcessState& st, const StopCondition& stop,
                      const std::function<void(const ProcessState&)>& before_step = {},
                      std::ostream* journal = nullptr,
                      const std::function<void(const StepReport&)>& after_step = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    RunSummary sum;
    while (st.available_count() > 0) {
        if (stop.max_steps >= 0 && st.i() >= stop.max_steps) break;
        if (stop.max_seconds >= 0) {
            const double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            if (el > stop.max_seconds) break;
        }
        if (before_step) before_step(st);
        const auto rep = st.step();
        if (journal != nullptr) {
            *journal << rep.i << " selected=" << rep.selected.a << ',' << rep.selected.b << ',' << rep.selected.c
                     << " excluded_count=" << rep.excluded.size() << '\n';
        }
        if (after_step) after_step(rep);
    }
    sum.steps = st.i();
    sum.exhausted = st.available_count() == 0;
    sum.available_left = st.available_count();
    sum.uncovered_left = st.uncovered_count();
    sum.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return sum;
}

}  // namespace hgsts
