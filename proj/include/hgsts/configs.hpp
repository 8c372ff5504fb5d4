#pragma once

// Forbidden and Erdős configurations: membership tests, exhaustive enumeration
// up to j_max points, the explicit j-point family, and the counting constants
// erd_j and J_j. The ErdosCatalog also carries the per-entry data that the
// process engine's embedding search runs on.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hgsts/canonical.hpp"
#include "hgsts/triple.hpp"

namespace hgsts {

/// Vertex bitmask of a block (requires labels < 64).
inline std::uint64_t block_mask(const Triple& t) {
    return (std::uint64_t{1} << t.a) | (std::uint64_t{1} << t.b) | (std::uint64_t{1} << t.c);
}

inline bool is_forbidden(const TripleSystem& s) {
    const auto j = static_cast<std::int64_t>(s.points().size());
    return j >= 4 && static_cast<std::int64_t>(s.size()) == j - 2;
}

struct ErdosVerdict {
    bool erdos = false;
    bool forbidden = false;
    /// A forbidden proper sub-configuration (fewest blocks first), when one exists.
    std::optional<TripleSystem> witness;
};

/// Exact minimality test by scanning all proper block subsets.
inline ErdosVerdict is_erdos(const TripleSystem& s) {
    ErdosVerdict v;
    v.forbidden = is_forbidden(s);
    if (!v.forbidden) return v;
    const auto& blocks = s.blocks();
    const int m = static_cast<int>(blocks.size());
    if (m > 24) throw InvalidArgument("is_erdos: more than 24 blocks");
    // Point masks need compact labels.
    const auto c = s.compacted();
    std::vector<std::uint64_t> bm;
    for (const auto& t : c.blocks()) bm.push_back(block_mask(t));
    for (int size = 2; size < m; ++size) {
        // Gosper's hack over masks with `size` bits.
        std::uint32_t mask = (1u << size) - 1;
        while (mask < (1u << m)) {
            std::uint64_t support = 0;
            for (int b = 0; b < m; ++b) {
                if (mask >> b & 1u) support |= bm[b];
            }
            if (std::popcount(support) == size + 2) {
                std::vector<Triple> sub;
                for (int b = 0; b < m; ++b) {
                    if (mask >> b & 1u) sub.push_back(blocks[b]);
                }
                v.witness = TripleSystem{s.n(), std::move(sub)};
                return v;
            }
            const std::uint32_t lo = mask & -mask;
            const std::uint32_t r = mask + lo;
            mask = (((r ^ mask) >> 2) / lo) | r;
        }
    }
    v.erdos = true;
    return v;
}

/// The explicit Erdős configuration on j points: e = 0, o = 1, x_l = l + 1.
inline TripleSystem build_family(int j) {
    if (j < 6) throw InvalidArgument("build_family: j must be at least 6");
    const Vertex e = 0;
    const Vertex o = 1;
    auto x = [](int l) { return static_cast<Vertex>(l + 1); };
    std::vector<Triple> blocks;
    for (int l = 1; l <= j - 3; ++l) blocks.emplace_back(l % 2 == 1 ? o : e, x(l), x(l + 1));
    if (j % 2 == 0) {
        blocks.emplace_back(e, x(j - 2), x(1));
    } else {
        blocks.emplace_back(x(j - 4), x(j - 2), x(1));
    }
    return {j, std::move(blocks)};
}

namespace detail {

/// Depth-first search over lexicographically increasing block lists on [j] whose proper
/// sub-collections all satisfy "blocks <= support - 3" (a property of every Erdős configuration).
/// With `first_occurrence`, new labels must appear in increasing order, which every
/// isomorphism class admits (its lexicographically least labeling has this shape).
class ErdosSearch {
public:
    ErdosSearch(int j, bool first_occurrence) : j_(j), first_occ_(first_occurrence) {
        for (Vertex a = 0; a < j; ++a) {
            for (Vertex b = a + 1; b < j; ++b) {
                for (Vertex c = b + 1; c < j; ++c) all_.emplace_back(a, b, c);
            }
        }
        deg_.assign(static_cast<std::size_t>(j), 0);
    }

    template <class Leaf>
    void run(const std::vector<Triple>& prefix, Leaf&& leaf) {
        for (const auto& t : prefix) push(t);
        const auto start = prefix.empty() ? 0
                                          : static_cast<std::size_t>(
                                                std::upper_bound(all_.begin(), all_.end(), prefix.back()) -
                                                all_.begin());
        dfs(start, leaf);
    }

private:
    [[nodiscard]] int used_labels() const {
        return std::popcount(support_all());
    }
    [[nodiscard]] std::uint64_t support_all() const {
        std::uint64_t s = 0;
        for (auto m : masks_) s |= m;
        return s;
    }

    void push(const Triple& t) {
        cur_.push_back(t);
        masks_.push_back(block_mask(t));
        for (auto v : t.vertices()) ++deg_[v];
    }
    void pop() {
        for (auto v : cur_.back().vertices()) --deg_[v];
        cur_.pop_back();
        masks_.pop_back();
    }

    // Every sub-collection containing the new block t stays strictly sparse,
    // except the full collection at the final depth.
    [[nodiscard]] bool sparse_with(const Triple& t, bool final) const {
        const std::uint64_t tm = block_mask(t);
        const int p = static_cast<int>(masks_.size());
        const std::uint32_t full = (1u << p) - 1;
        for (std::uint32_t mask = 0; mask <= full; ++mask) {
            if (final && mask == full) continue;
            std::uint64_t support = tm;
            for (int b = 0; b < p; ++b) {
                if (mask >> b & 1u) support |= masks_[b];
            }
            const int s = std::popcount(support);
            const int blocks = std::popcount(mask) + 1;
            if (s >= 4 && blocks > s - 3) return false;
        }
        return true;
    }

    template <class Leaf>
    void dfs(std::size_t from, Leaf& leaf) {
        const int need = j_ - 2;
        const int have = static_cast<int>(cur_.size());
        if (have == need) {
            if (used_labels() != j_) return;
            TripleSystem s{j_, cur_};
            if (is_erdos(s).erdos) leaf(s);
            return;
        }
        const int used = used_labels();
        const int min_deg = j_ >= 6 ? 2 : 1;
        const bool final = have + 1 == need;
        for (std::size_t idx = from; idx < all_.size(); ++idx) {
            const Triple& t = all_[idx];
            // Vertices below t.a are frozen from here on.
            bool frozen_ok = true;
            for (Vertex v = 0; v < t.a; ++v) {
                if (deg_[v] < min_deg) {
                    frozen_ok = false;
                    break;
                }
            }
            if (!frozen_ok) break;  // t.a only grows along the list
            if (first_occ_) {
                Vertex next = static_cast<Vertex>(used);
                bool ok = true;
                for (auto v : t.vertices()) {
                    if (v >= used) {
                        if (v != next) {
                            ok = false;
                            break;
                        }
                        ++next;
                    }
                }
                if (!ok) continue;
            }
            const int new_labels = std::popcount(block_mask(t) & ~support_all());
            const int remaining = need - have - 1;
            if (j_ - used - new_labels > 3 * remaining) continue;
            if (!sparse_with(t, final)) continue;
            push(t);
            dfs(idx + 1, leaf);
            pop();
        }
    }

    int j_;
    bool first_occ_;
    std::vector<Triple> all_;
    std::vector<Triple> cur_;
    std::vector<std::uint64_t> masks_;
    std::vector<int> deg_;
};

}  // namespace detail

/// Number of Erdős configurations on the labeled set [j] (exact support) containing {0,1,2}.
inline std::uint64_t erd_count(int j) {
    if (j < 4 || j > 9) throw InvalidArgument("erd_count: j must lie in [4, 9]");
    std::uint64_t count = 0;
    detail::ErdosSearch search(j, false);
    search.run({Triple{0, 1, 2}}, [&](const TripleSystem&) { ++count; });
    return count;
}

/// Embedding plan for one rooted search over a catalog entry.
struct SlotPlan {
    int root = 0;    // slot mapped onto the anchor triple
    int free = -1;   // slot whose image is read off (or -1)
    std::uint64_t weight = 1;  // size of the automorphism orbit this plan represents
    std::vector<int> order;    // remaining slots in search order (excluding root and free)
};

struct ErdosEntry {
    int j = 0;
    int id = 0;
    std::string name;
    TripleSystem config;  // canonical labels 0..j-1
    std::uint64_t aut = 0;
    std::vector<std::vector<Vertex>> automorphisms;
    std::vector<SlotPlan> root_plans;  // orbit representatives of single slots
    std::vector<SlotPlan> pair_plans;  // orbit representatives of ordered slot pairs
};

namespace detail {

inline std::vector<int> greedy_order(const TripleSystem& s, int root, int free) {
    const auto& b = s.blocks();
    const int m = static_cast<int>(b.size());
    std::uint64_t mapped = block_mask(b[root]);
    std::vector<char> done(static_cast<std::size_t>(m), 0);
    done[root] = 1;
    if (free >= 0) done[free] = 1;
    std::vector<int> order;
    while (true) {
        int best = -1;
        int best_count = -1;
        for (int x = 0; x < m; ++x) {
            if (done[x]) continue;
            const int cnt = std::popcount(block_mask(b[x]) & mapped);
            if (cnt > best_count) {
                best = x;
                best_count = cnt;
            }
        }
        if (best < 0) break;
        done[best] = 1;
        order.push_back(best);
        mapped |= block_mask(b[best]);
    }
    return order;
}

inline ErdosEntry make_entry(const TripleSystem& canonical, int j, int id) {
    ErdosEntry e;
    e.j = j;
    e.id = id;
    e.config = canonical;
    e.automorphisms = automorphisms(canonical);
    e.aut = e.automorphisms.size();
    const auto& blocks = canonical.blocks();
    const int m = static_cast<int>(blocks.size());
    // Block permutations induced by each automorphism.
    std::vector<std::vector<int>> bperm;
    for (const auto& sigma : e.automorphisms) {
        std::vector<int> p(static_cast<std::size_t>(m));
        for (int x = 0; x < m; ++x) {
            const auto& t = blocks[x];
            Triple img{sigma[t.a], sigma[t.b], sigma[t.c]};
            p[x] = static_cast<int>(std::lower_bound(blocks.begin(), blocks.end(), img) - blocks.begin());
        }
        bperm.push_back(std::move(p));
    }
    std::vector<char> seen(static_cast<std::size_t>(m), 0);
    for (int s = 0; s < m; ++s) {
        if (seen[s]) continue;
        std::uint64_t orbit = 0;
        std::vector<char> in(static_cast<std::size_t>(m), 0);
        for (const auto& p : bperm) {
            if (!in[p[s]]) {
                in[p[s]] = 1;
                seen[p[s]] = 1;
                ++orbit;
            }
        }
        e.root_plans.push_back({s, -1, orbit, greedy_order(canonical, s, -1)});
    }
    std::vector<char> pseen(static_cast<std::size_t>(m * m), 0);
    for (int s1 = 0; s1 < m; ++s1) {
        for (int s2 = 0; s2 < m; ++s2) {
            if (s1 == s2 || pseen[s1 * m + s2]) continue;
            std::uint64_t orbit = 0;
            for (const auto& p : bperm) {
                auto& flag = pseen[p[s1] * m + p[s2]];
                if (!flag) {
                    flag = 1;
                    ++orbit;
                }
            }
            e.pair_plans.push_back({s1, s2, orbit, greedy_order(canonical, s1, s2)});
        }
    }
    static const std::vector<std::pair<std::string, std::string>> named = {
        {"diamond", "012,013"},
        {"Pasch", "012,034,135,245"},
        {"mitre", "012,034,135,236,456"},
        {"6-cycle", "012,034,135,246,257,367"},
        {"crown", "012,034,135,236,147,567"},
    };
    for (const auto& [nm, digits] : named) {
        auto sys = from_digits(10, digits).compacted();
        if (sys.n() == j && canonical_form(sys).form == canonical) e.name = nm;
    }
    return e;
}

}  // namespace detail

class ErdosCatalog {
public:
    static constexpr int kMaxJ = 10;

    ErdosCatalog() = default;

    [[nodiscard]] int j_max() const { return j_max_; }
    [[nodiscard]] const std::vector<ErdosEntry>& entries() const { return entries_; }
    [[nodiscard]] std::vector<const ErdosEntry*> entries_for(int j) const {
        std::vector<const ErdosEntry*> out;
        for (const auto& e : entries_) {
            if (e.j == j) out.push_back(&e);
        }
        return out;
    }
    [[nodiscard]] std::size_t count(int j) const { return entries_for(j).size(); }

    /// Labeled copies on [j] containing a fixed triple, by orbit counting.
    [[nodiscard]] std::uint64_t erd(int j) const {
        if (j < 4 || j > j_max_) throw InvalidArgument("erd: j outside catalog range");
        std::uint64_t total = 0;
        for (const auto* e : entries_for(j)) {
            const std::uint64_t labelings = static_cast<std::uint64_t>(factorial_real(j)) / e->aut;
            total += labelings * static_cast<std::uint64_t>(j - 2) / binom(j, 3);
        }
        return total;
    }

    [[nodiscard]] std::string serialize() const {
        std::ostringstream os;
        os << "erdos-catalog v1 jmax=" << j_max_ << "\n";
        for (const auto& e : entries_) {
            os << "j=" << e.j << " id=" << e.id << " blocks=";
            bool first = true;
            for (const auto& t : e.config.blocks()) {
                if (!first) os << ';';
                first = false;
                os << t.a << ',' << t.b << ',' << t.c;
            }
            os << "\n";
        }
        return os.str();
    }

    static ErdosCatalog from_canonical(int j_max, const std::vector<TripleSystem>& configs) {
        ErdosCatalog cat;
        cat.j_max_ = j_max;
        std::map<int, int> next_id;
        for (const auto& c : configs) {
            const int j = c.n();
            cat.entries_.push_back(detail::make_entry(c, j, next_id[j]++));
        }
        return cat;
    }

    /// Parses the text format; every entry is re-validated as a canonical Erdős configuration.
    static ErdosCatalog parse(const std::string& text) {
        std::istringstream is(text);
        std::string line;
        if (!std::getline(is, line)) throw InvalidArgument("catalog: empty input");
        const std::string prefix = "erdos-catalog v1 jmax=";
        if (line.rfind("erdos-catalog ", 0) == 0 && line.rfind(prefix, 0) != 0) {
            throw InvalidArgument("catalog: unsupported version in header: " + line);
        }
        if (line.rfind(prefix, 0) != 0) throw InvalidArgument("catalog: bad header: " + line);
        const int j_max = std::stoi(line.substr(prefix.size()));
        if (j_max < 4 || j_max > kMaxJ) throw InvalidArgument("catalog: jmax out of range");
        std::vector<TripleSystem> configs;
        while (std::getline(is, line)) {
            if (line.empty()) continue;
            int j = 0;
            int id = 0;
            std::string blocks;
            std::istringstream ls(line);
            std::string tok;
            while (ls >> tok) {
                if (tok.rfind("j=", 0) == 0) j = std::stoi(tok.substr(2));
                else if (tok.rfind("id=", 0) == 0) id = std::stoi(tok.substr(3));
                else if (tok.rfind("blocks=", 0) == 0) blocks = tok.substr(7);
                else throw InvalidArgument("catalog: unexpected token " + tok);
            }
            (void)id;
            std::vector<Triple> ts;
            std::istringstream bs(blocks);
            std::string part;
            while (std::getline(bs, part, ';')) {
                int a = 0;
                int b = 0;
                int c = 0;
                char c1 = 0;
                char c2 = 0;
                std::istringstream ps(part);
                if (!(ps >> a >> c1 >> b >> c2 >> c) || c1 != ',' || c2 != ',') {
                    throw InvalidArgument("catalog: bad block " + part);
                }
                ts.emplace_back(a, b, c);
            }
            TripleSystem s{j, ts};
            if (!is_erdos(s).erdos || static_cast<int>(s.points().size()) != j || !(canonical_form(s).form == s)) {
                throw InvalidArgument("catalog: entry is not a canonical Erdős configuration: " + line);
            }
            configs.push_back(std::move(s));
        }
        return from_canonical(j_max, configs);
    }

private:
    int j_max_ = 0;
    std::vector<ErdosEntry> entries_;
};

/// All non-isomorphic Erdős configurations on 4..j_max points.
inline ErdosCatalog enumerate_erdos(int j_max) {
    if (j_max < 4 || j_max > ErdosCatalog::kMaxJ) {
        throw InvalidArgument("enumerate_erdos: j_max must lie in [4, 10]");
    }
    std::vector<TripleSystem> all;
    for (int j = 4; j <= j_max; ++j) {
        std::map<std::vector<Triple>, TripleSystem> found;
        detail::ErdosSearch search(j, true);
        search.run({Triple{0, 1, 2}}, [&](const TripleSystem& s) {
            auto cf = canonical_form(s).form;
            found.emplace(cf.blocks(), cf);
        });
        for (auto& [key, s] : found) all.push_back(s);
    }
    return ErdosCatalog::from_canonical(j_max, all);
}

/// J_j = erd_j * C(n-3, j-3).
inline double count_J(int n, int j, const ErdosCatalog& catalog) {
    if (j < 4 || n < j) throw InvalidArgument("count_J: need n >= j >= 4");
    return static_cast<double>(catalog.erd(j)) * binom_real(n - 3, j - 3);
}

}  // namespace hgsts
