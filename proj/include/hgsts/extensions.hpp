#pragma once

// Rooted extension types, their balancedness, extension counting, double/pair
// configuration counters, and exhaustive finite checks of the balancedness
// propositions over glued pairs of catalog configurations.

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hgsts/canonical.hpp"
#include "hgsts/configs.hpp"
#include "hgsts/process.hpp"
#include "hgsts/triple.hpp"

namespace hgsts {

inline constexpr int kMaxPatternVertices = 24;

/// A rooted 3-graph (H, U). V(H) is {0, ..., H.n()-1}; vertices outside U are free,
/// including isolated ones.
struct ExtensionType {
    TripleSystem H;
    std::vector<Vertex> U;  // sorted
    int kappa = 0;
    int ell = 0;
};

namespace detail {

inline std::uint32_t vertex_mask(const std::vector<Vertex>& vs) {
    std::uint32_t m = 0;
    for (auto v : vs) m |= 1u << v;
    return m;
}

inline std::uint32_t tmask(const Triple& t) { return (1u << t.a) | (1u << t.b) | (1u << t.c); }

inline void check_pattern(const TripleSystem& H, const std::vector<Vertex>& U) {
    if (H.n() > kMaxPatternVertices) throw InvalidArgument("extension type: pattern has too many vertices");
    std::set<Vertex> seen;
    for (auto u : U) {
        if (u < 0 || u >= H.n()) throw InvalidArgument("extension type: root outside V(H)");
        if (!seen.insert(u).second) throw InvalidArgument("extension type: repeated root");
    }
    const auto um = vertex_mask(U);
    for (const auto& t : H.blocks()) {
        if ((tmask(t) & ~um) == 0) throw InvalidArgument("extension type: H[U] must be empty");
    }
}

/// Maximum matching between free vertices and the blocks meeting them (Kuhn's algorithm).
inline int free_block_matching(const std::vector<std::uint32_t>& blocks, std::uint32_t free) {
    std::vector<int> match_block(blocks.size(), -1);
    std::vector<std::vector<int>> adj(32);
    for (int v = 0; v < 32; ++v) {
        if (!(free >> v & 1u)) continue;
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            if (blocks[b] >> v & 1u) adj[v].push_back(static_cast<int>(b));
        }
    }
    std::vector<char> seen;
    std::function<bool(int)> augment = [&](int v) {
        for (int b : adj[v]) {
            if (seen[b]) continue;
            seen[b] = 1;
            if (match_block[b] < 0 || augment(match_block[b])) {
                match_block[b] = v;
                return true;
            }
        }
        return false;
    };
    int size = 0;
    for (int v = 0; v < 32; ++v) {
        if (!(free >> v & 1u)) continue;
        seen.assign(blocks.size(), 0);
        if (augment(v)) ++size;
    }
    return size;
}

/// kappa from the Hall deficiency: max over X of |X| - |N(X)| = ell - (maximum matching).
inline int kappa_masks(const std::vector<std::uint32_t>& blocks, std::uint32_t all, std::uint32_t roots) {
    const std::uint32_t free = all & ~roots;
    return std::popcount(free) - free_block_matching(blocks, free);
}

inline std::vector<std::uint32_t> masks_of(const TripleSystem& H) {
    std::vector<std::uint32_t> out;
    for (const auto& t : H.blocks()) out.push_back(tmask(t));
    return out;
}

inline std::uint32_t full_mask(int n) { return n >= 32 ? ~0u : ((1u << n) - 1u); }

}  // namespace detail

/// kappa by scanning every U' between U and V(H).
inline int compute_kappa(const TripleSystem& H, const std::vector<Vertex>& U) {
    detail::check_pattern(H, U);
    const auto blocks = detail::masks_of(H);
    const std::uint32_t all = detail::full_mask(H.n());
    const std::uint32_t roots = detail::vertex_mask(U);
    const std::uint32_t free = all & ~roots;
    int best = 0;
    // Enumerate subsets X of the free vertices; U' = V(H) minus X.
    for (std::uint32_t x = free;; x = (x - 1) & free) {
        int touching = 0;
        for (auto b : blocks) touching += (b & x) != 0;
        best = std::max(best, std::popcount(x) - touching);
        if (x == 0) break;
    }
    return best;
}

/// kappa as the least kappa >= 0 satisfying the balancedness definition.
inline int kappa_direct(const TripleSystem& H, const std::vector<Vertex>& U) {
    detail::check_pattern(H, U);
    const auto blocks = detail::masks_of(H);
    const std::uint32_t all = detail::full_mask(H.n());
    const std::uint32_t roots = detail::vertex_mask(U);
    const std::uint32_t free = all & ~roots;
    for (int kappa = 0;; ++kappa) {
        bool ok = true;
        for (std::uint32_t extra = free;; extra = (extra - 1) & free) {
            const std::uint32_t uprime = roots | extra;
            int outside = 0;
            for (auto b : blocks) outside += (b & ~uprime) != 0;
            if (outside < std::popcount(all & ~uprime) - kappa) {
                ok = false;
                break;
            }
            if (extra == 0) break;
        }
        if (ok) return kappa;
    }
}

/// kappa via maximum matching between free vertices and incident blocks.
inline int kappa_matching(const TripleSystem& H, const std::vector<Vertex>& U) {
    detail::check_pattern(H, U);
    return detail::kappa_masks(detail::masks_of(H), detail::full_mask(H.n()), detail::vertex_mask(U));
}

inline ExtensionType make_extension_type(TripleSystem H, std::vector<Vertex> U) {
    std::sort(U.begin(), U.end());
    ExtensionType x;
    x.kappa = kappa_matching(H, U);
    x.ell = H.n() - static_cast<int>(U.size());
    x.H = std::move(H);
    x.U = std::move(U);
    return x;
}

/// Embeddings phi of H into G with phi(U) = R. Unordered (default): every assignment of R to
/// U counts, so the result carries the |U|! factor. Ordered: U[x] maps to R[x].
inline std::uint64_t count_extensions(const TripleSystem& G, const std::vector<Vertex>& R, const ExtensionType& ext,
                                      bool ordered = false) {
    if (R.size() != ext.U.size()) throw InvalidArgument("count_extensions: |R| must equal |U|");
    const int n = G.n();
    for (auto r : R) {
        if (r < 0 || r >= n) throw InvalidArgument("count_extensions: root outside V(G)");
    }
    if (std::set<Vertex>(R.begin(), R.end()).size() != R.size()) {
        throw InvalidArgument("count_extensions: repeated root");
    }
    const auto& H = ext.H;
    std::unordered_set<Triple> gset(G.blocks().begin(), G.blocks().end());
    std::unordered_map<std::uint64_t, std::vector<Vertex>> thirds;
    for (const auto& t : G.blocks()) {
        for (const auto& e : t.pairs()) thirds[pair_index(e, n)].push_back(t.third(e));
    }
    const int hn = H.n();
    std::vector<char> is_root(static_cast<std::size_t>(hn), 0);
    for (auto u : ext.U) is_root[u] = 1;
    std::vector<int> deg(static_cast<std::size_t>(hn), 0);
    for (const auto& t : H.blocks()) {
        for (auto v : t.vertices()) ++deg[v];
    }
    // Free vertices on blocks, ordered so each has as many earlier neighbours as possible.
    std::vector<Vertex> order;
    std::vector<char> placed(is_root.begin(), is_root.end());
    int isolated = 0;
    for (Vertex v = 0; v < hn; ++v) {
        if (!is_root[v] && deg[v] == 0) ++isolated;
    }
    while (true) {
        int best = -1;
        int best_score = -1;
        for (Vertex v = 0; v < hn; ++v) {
            if (placed[v] || deg[v] == 0) continue;
            int score = 0;
            for (const auto& t : H.blocks()) {
                if (!t.contains(v)) continue;
                for (auto w : t.vertices()) score += (w != v && placed[w]) ? 1 : 0;
            }
            if (score > best_score) {
                best = v;
                best_score = score;
            }
        }
        if (best < 0) break;
        placed[best] = 1;
        order.push_back(best);
    }
    // Blocks to test once their last vertex (in placement order) is bound.
    std::vector<int> rank(static_cast<std::size_t>(hn), -1);
    for (std::size_t x = 0; x < order.size(); ++x) rank[order[x]] = static_cast<int>(x);
    std::vector<std::vector<Triple>> check_at(order.size() + 1);
    for (const auto& t : H.blocks()) {
        int last = -1;
        for (auto v : t.vertices()) last = std::max(last, rank[v]);
        check_at[static_cast<std::size_t>(last + 1)].push_back(t);
    }
    const int used_roots = static_cast<int>(R.size());
    std::uint64_t tail = 1;
    for (int x = 0; x < isolated; ++x) tail *= static_cast<std::uint64_t>(n - used_roots - static_cast<int>(order.size()) - x);
    if (n - used_roots - static_cast<int>(order.size()) - isolated < 0) return 0;

    std::vector<Vertex> img(static_cast<std::size_t>(hn), -1);
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    auto block_ok = [&](const std::vector<Triple>& ts) {
        for (const auto& t : ts) {
            if (!gset.count(Triple{img[t.a], img[t.b], img[t.c]})) return false;
        }
        return true;
    };
    std::uint64_t total = 0;
    std::function<void(std::size_t)> dfs = [&](std::size_t d) {
        if (d == order.size()) {
            total += tail;
            return;
        }
        const Vertex v = order[d];
        // Prefer candidates from a block with two bound vertices.
        const std::vector<Vertex>* cands = nullptr;
        for (const auto& t : H.blocks()) {
            if (!t.contains(v)) continue;
            std::array<Vertex, 2> other{};
            int k = 0;
            for (auto w : t.vertices()) {
                if (w != v) other[k++] = w;
            }
            if (img[other[0]] >= 0 && img[other[1]] >= 0) {
                auto it = thirds.find(pair_index(Pair{img[other[0]], img[other[1]]}, n));
                static const std::vector<Vertex> none;
                cands = it == thirds.end() ? &none : &it->second;
                break;
            }
        }
        auto attempt = [&](Vertex h) {
            if (used[h]) return;
            img[v] = h;
            used[h] = 1;
            if (block_ok(check_at[d + 1])) dfs(d + 1);
            used[h] = 0;
            img[v] = -1;
        };
        if (cands != nullptr) {
            const auto copy = *cands;
            for (auto h : copy) attempt(h);
        } else {
            for (Vertex h = 0; h < n; ++h) attempt(h);
        }
    };
    std::vector<Vertex> rperm(R);
    if (!ordered) std::sort(rperm.begin(), rperm.end());
    do {
        for (std::size_t x = 0; x < ext.U.size(); ++x) {
            img[ext.U[x]] = rperm[x];
            used[rperm[x]] = 1;
        }
        if (block_ok(check_at[0])) dfs(0);
        for (std::size_t x = 0; x < ext.U.size(); ++x) {
            used[rperm[x]] = 0;
            img[ext.U[x]] = -1;
        }
    } while (!ordered && std::next_permutation(rperm.begin(), rperm.end()));
    return total;
}

/// X_{T,double}: unordered pairs of distinct dangerous configurations at T with the same
/// available block.
inline std::uint64_t count_double(const ProcessState& st, const Triple& t) { return st.danger_profile(t).doubles(); }

/// X_{T1,T2}: pairs (S1, S2), not both diamonds, of dangerous configurations at T1 and T2
/// whose unique available blocks coincide.
inline std::uint64_t count_pair(const DangerProfile& p1, const DangerProfile& p2) {
    std::uint64_t total = 0;
    for (const auto& e1 : p1.entries) {
        const auto* e2 = p2.find(e1.other);
        if (e2 == nullptr) continue;
        total += e1.total * e2->total - e1.diamonds * e2->diamonds;
    }
    return total;
}

inline std::uint64_t count_pair(const ProcessState& st, const Triple& t1, const Triple& t2) {
    if (t1 == t2) throw InvalidArgument("count_pair: triples must differ");
    return count_pair(st.danger_profile(t1), st.danger_profile(t2));
}

/// Threats to the pair (S, T) for a configuration S through available T, next to the quantities
/// of the approximation th ~ sum |T_{T'}| and its pair-count error term.
struct ErdosThreatCheck {
    std::uint64_t th = 0;
    std::uint64_t threat_sum = 0;  // sum over T' in (S - T) ∩ A of |T_{T'}|
    std::uint64_t pair_sum = 0;    // sum over unordered pairs T' != T'' in S ∩ A of X_{T',T''}
    /// |th - threat_sum| - pair_sum: the additive constant this instance needs.
    [[nodiscard]] std::int64_t excess() const {
        const auto diff = static_cast<std::int64_t>(th) - static_cast<std::int64_t>(threat_sum);
        return std::abs(diff) - static_cast<std::int64_t>(pair_sum);
    }
};

inline ErdosThreatCheck erdos_threat_check(const ProcessState& st, const Triple& t, const std::vector<Triple>& S) {
    if (!st.is_available(t)) throw InvalidArgument("erdos_threat_check: T must be available");
    if (std::find(S.begin(), S.end(), t) == S.end()) throw InvalidArgument("erdos_threat_check: T must lie in S");
    std::vector<Triple> avail_in_s;
    for (const auto& b : S) {
        if (st.is_available(b)) avail_in_s.push_back(b);
    }
    ErdosThreatCheck out;
    std::set<Triple> reach;
    for (const auto& b : avail_in_s) {
        if (b == t) continue;
        const auto th = st.threats_of(b);
        out.threat_sum += th.size();
        reach.insert(b);
        reach.insert(th.begin(), th.end());
    }
    reach.erase(t);
    for (const auto& x : st.threats_of(t)) reach.erase(x);
    out.th = reach.size();
    std::vector<DangerProfile> prof;
    for (const auto& b : avail_in_s) prof.push_back(st.danger_profile(b));
    for (std::size_t a = 0; a < prof.size(); ++a) {
        for (std::size_t b = a + 1; b < prof.size(); ++b) out.pair_sum += count_pair(prof[a], prof[b]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Exhaustive balancedness checks over catalog configurations and their gluings.

struct PropositionClassReport {
    std::string name;
    std::uint64_t instances = 0;
    std::uint64_t counterexamples = 0;
    std::string first_counterexample;

    [[nodiscard]] bool ok() const { return counterexamples == 0; }
};

struct BalancednessReport {
    int k = 0;
    int m = 0;
    std::vector<PropositionClassReport> classes;
    double seconds = 0;

    [[nodiscard]] bool ok() const {
        return std::all_of(classes.begin(), classes.end(), [](const auto& c) { return c.ok(); });
    }
    [[nodiscard]] std::string text() const {
        std::ostringstream os;
        for (const auto& c : classes) {
            os << (c.ok() ? "PASS " : "FAIL ") << c.name << " instances=" << c.instances
               << " counterexamples=" << c.counterexamples;
            if (!c.ok()) os << " first=" << c.first_counterexample;
            os << '\n';
        }
        return os.str();
    }
};

namespace detail {

inline std::string describe_blocks(const std::vector<Triple>& bs) {
    std::ostringstream os;
    for (std::size_t x = 0; x < bs.size(); ++x) {
        if (x) os << ';';
        os << bs[x].a << ',' << bs[x].b << ',' << bs[x].c;
    }
    return os.str();
}

template <class D>
void record(PropositionClassReport& rep, bool ok, D&& describe) {
    ++rep.instances;
    if (!ok) {
        if (rep.counterexamples == 0) rep.first_counterexample = describe();
        ++rep.counterexamples;
    }
}

/// A glued pair: S1 on labels 0..j1-1, S2 relabelled into the union's vertex set.
struct Gluing {
    int nv = 0;
    std::vector<Triple> s1;
    std::vector<Triple> s2;
    std::uint32_t v1 = 0;
    std::uint32_t v2 = 0;
};

/// All partial injections of V(S2) into V(S1) with at least `min_overlap` identified vertices;
/// unidentified S2 vertices get fresh labels in increasing order.
template <class F>
void for_each_overlap(const TripleSystem& s1, const TripleSystem& s2, int min_overlap, F&& f) {
    const int j1 = s1.n();
    const int j2 = s2.n();
    std::vector<Vertex> img(static_cast<std::size_t>(j2), -1);
    std::vector<char> used(static_cast<std::size_t>(j1), 0);
    std::function<void(int, int, int)> rec = [&](int v, int overlap, int fresh) {
        if (v == j2) {
            if (overlap < min_overlap) return;
            Gluing g;
            g.nv = j1 + fresh;
            g.s1 = s1.blocks();
            for (const auto& t : s2.blocks()) g.s2.emplace_back(img[t.a], img[t.b], img[t.c]);
            std::sort(g.s2.begin(), g.s2.end());
            g.v1 = full_mask(j1);
            for (auto x : img) g.v2 |= 1u << x;
            f(g);
            return;
        }
        if (overlap + (j2 - v) < min_overlap) return;
        for (Vertex h = 0; h < j1; ++h) {
            if (used[h]) continue;
            used[h] = 1;
            img[v] = h;
            rec(v + 1, overlap + 1, fresh);
            used[h] = 0;
        }
        img[v] = j1 + fresh;
        rec(v + 1, overlap, fresh + 1);
        img[v] = -1;
    };
    rec(0, 0, 0);
}

/// Gluings in which S2's block b2 is identified with S1's block b1 (all 6 bijections), over
/// S1-block orbit representatives; other S2 vertices go to unused S1 vertices or fresh labels.
template <class F>
void for_each_shared_block(const ErdosEntry& e1, const ErdosEntry& e2, F&& f) {
    const auto& s1 = e1.config;
    const auto& s2 = e2.config;
    const int j1 = s1.n();
    const int j2 = s2.n();
    for (const auto& plan : e1.root_plans) {
        const auto& b1 = s1.blocks()[plan.root];
        for (std::size_t x2 = 0; x2 < s2.blocks().size(); ++x2) {
            const auto& b2 = s2.blocks()[x2];
            std::array<Vertex, 3> tgt{b1.a, b1.b, b1.c};
            std::sort(tgt.begin(), tgt.end());
            do {
                std::vector<Vertex> img(static_cast<std::size_t>(j2), -1);
                std::vector<char> used(static_cast<std::size_t>(j1), 0);
                img[b2.a] = tgt[0];
                img[b2.b] = tgt[1];
                img[b2.c] = tgt[2];
                for (auto t : tgt) used[t] = 1;
                std::function<void(int, int)> rec = [&](int v, int fresh) {
                    if (v == j2) {
                        Gluing g;
                        g.nv = j1 + fresh;
                        g.s1 = s1.blocks();
                        for (const auto& t : s2.blocks()) g.s2.emplace_back(img[t.a], img[t.b], img[t.c]);
                        std::sort(g.s2.begin(), g.s2.end());
                        g.v1 = full_mask(j1);
                        for (auto x : img) g.v2 |= 1u << x;
                        f(g, b1);
                        return;
                    }
                    if (img[v] >= 0) {
                        rec(v + 1, fresh);
                        return;
                    }
                    for (Vertex h = 0; h < j1; ++h) {
                        if (used[h]) continue;
                        used[h] = 1;
                        img[v] = h;
                        rec(v + 1, fresh);
                        used[h] = 0;
                    }
                    img[v] = j1 + fresh;
                    rec(v + 1, fresh + 1);
                    img[v] = -1;
                };
                rec(0, 0);
            } while (std::next_permutation(tgt.begin(), tgt.end()));
        }
    }
}

inline std::vector<Triple> block_union(const std::vector<Triple>& a, const std::vector<Triple>& b) {
    std::vector<Triple> u;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(u));
    return u;
}

inline std::vector<Triple> without(std::vector<Triple> bs, std::initializer_list<Triple> drop) {
    for (const auto& d : drop) bs.erase(std::remove(bs.begin(), bs.end(), d), bs.end());
    return bs;
}

inline std::vector<std::uint32_t> masks(const std::vector<Triple>& bs) {
    std::vector<std::uint32_t> out;
    for (const auto& t : bs) out.push_back(tmask(t));
    return out;
}

inline std::string describe_gluing(const Gluing& g, const std::string& extra) {
    return "S1=" + describe_blocks(g.s1) + " S2=" + describe_blocks(g.s2) + extra;
}

}  // namespace detail

/// Exhaustive finite checks of the balancedness facts and propositions over every catalog
/// configuration on at most k+2 points and every gluing of two of them (at most 2(k+2) vertices).
inline BalancednessReport verify_balancedness_props(const ErdosCatalog& catalog, int k) {
    using namespace detail;
    if (k < 2) throw InvalidArgument("verify_balancedness_props: k must be at least 2");
    if (k + 2 > catalog.j_max()) throw InvalidArgument("verify_balancedness_props: catalog must cover k+2");
    const auto t0 = std::chrono::steady_clock::now();
    BalancednessReport rep;
    rep.k = k;
    rep.m = 2 * (k + 2);
    if (rep.m > 32) throw InvalidArgument("verify_balancedness_props: k too large for 32-bit vertex masks");
    std::vector<const ErdosEntry*> entries;
    for (const auto& e : catalog.entries()) {
        if (e.j <= k + 2) entries.push_back(&e);
    }

    PropositionClassReport simple{"simple-erdos-extension", 0, 0, ""};
    PropositionClassReport analysis{"erdos-extension-analysis", 0, 0, ""};
    for (const auto* e : entries) {
        const int j = e->j;
        const auto& bs = e->config.blocks();
        const auto bm = masks(bs);
        const std::uint32_t all = full_mask(j);
        // Removing one block T' leaves at least |V(S) \ U| blocks outside any U with |U| >= 4.
        for (std::size_t tp = 0; tp < bs.size(); ++tp) {
            for (std::uint32_t u = 0; u <= all; ++u) {
                if (std::popcount(u) < 4) continue;
                int outside = 0;
                for (std::size_t b = 0; b < bm.size(); ++b) outside += (b != tp && (bm[b] & ~u) != 0) ? 1 : 0;
                record(simple, outside >= std::popcount(all & ~u), [&] {
                    return e->name + " T'=" + describe_blocks({bs[tp]}) + " U=" + std::to_string(u);
                });
            }
        }
        // Sub-collections S' spanning V(S): (S' - S'[U], U) is max(j-3-c-a, 0)-balanced.
        const int nb = static_cast<int>(bs.size());
        for (std::uint32_t sub = 0; sub < (1u << nb); ++sub) {
            std::uint32_t span = 0;
            for (int b = 0; b < nb; ++b) {
                if (sub >> b & 1u) span |= bm[b];
            }
            if (span != all) continue;
            const int c = std::popcount(sub);
            for (std::uint32_t u = 0; u <= all; ++u) {
                if (std::popcount(u) < 4) continue;
                int a = 0;
                std::vector<std::uint32_t> H;
                for (int b = 0; b < nb; ++b) {
                    const bool inside = (bm[b] & ~u) == 0;
                    if (sub >> b & 1u) {
                        if (!inside) H.push_back(bm[b]);
                    } else if (inside) {
                        ++a;
                    }
                }
                const int bound = std::max(j - 3 - c - a, 0);
                record(analysis, kappa_masks(H, all, u) <= bound, [&] {
                    return e->name + " sub=" + std::to_string(sub) + " U=" + std::to_string(u);
                });
            }
        }
    }

    PropositionClassReport overlap4{"overlap-count-4plus", 0, 0, ""};
    PropositionClassReport overlap3{"overlap-count-3", 0, 0, ""};
    for (const auto* e1 : entries) {
        for (const auto* e2 : entries) {
            for_each_overlap(e1->config, e2->config, 3, [&](const Gluing& g) {
                if (g.s1 == g.s2) return;
                const int shared_v = std::popcount(g.v1 & g.v2);
                const int union_v = std::popcount(g.v1 | g.v2);
                const int union_b = static_cast<int>(block_union(g.s1, g.s2).size());
                if (shared_v >= 4) {
                    record(overlap4, union_b >= union_v - 1, [&] { return describe_gluing(g, ""); });
                } else {
                    record(overlap3, union_b >= union_v - 2, [&] { return describe_gluing(g, ""); });
                }
            });
        }
    }

    PropositionClassReport shared{"shared-block-count", 0, 0, ""};
    PropositionClassReport dbl{"double-extension", 0, 0, ""};
    PropositionClassReport butterfly{"butterfly", 0, 0, ""};
    std::set<std::vector<std::pair<int, Triple>>> seen;
    for (const auto* e1 : entries) {
        for (const auto* e2 : entries) {
            const bool both_diamonds = e1->j == 4 && e2->j == 4;
            for_each_shared_block(*e1, *e2, [&](const Gluing& g, const Triple& tp) {
                if (g.s1 == g.s2) return;
                const auto uni = block_union(g.s1, g.s2);
                std::vector<int> colours;
                for (const auto& t : uni) {
                    const bool in1 = std::binary_search(g.s1.begin(), g.s1.end(), t);
                    const bool in2 = std::binary_search(g.s2.begin(), g.s2.end(), t);
                    colours.push_back(t == tp ? 3 : (in1 && in2 ? 2 : (in1 ? 0 : 1)));
                }
                // Distinct pairs (e1, e2) with the same coloured key are the same instance.
                auto key = coloured_canonical_key(g.nv, uni, colours);
                key.emplace_back(-1, Triple{e1->j, e1->id, 0});
                key.emplace_back(-2, Triple{e2->j, e2->id, 0});
                if (!seen.insert(std::move(key)).second) return;

                const std::uint32_t all = full_mask(g.nv);
                // H = (S1 ∪ S2) - T'; every admissible U' leaves at least |V(H) \ U'| blocks outside.
                const auto hm = masks(without(uni, {tp}));
                for (std::uint32_t up = 0; up <= all; ++up) {
                    if (std::popcount(up & g.v1) < 4) continue;
                    if (std::popcount((up | g.v1) & g.v2) < 4) continue;
                    int outside = 0;
                    for (auto b : hm) outside += (b & ~up) != 0;
                    record(shared, outside >= std::popcount(all & ~up), [&] {
                        return describe_gluing(g, " T'=" + describe_blocks({tp}) + " U'=" + std::to_string(up));
                    });
                    if (up == all) break;
                }
                // H = (S1 ∪ S2) - {T1, T2, T'}, U = T1 ∪ T2: 0-balanced when H[U] is empty.
                if (!both_diamonds) {
                    for (const auto& t1 : g.s1) {
                        for (const auto& t2 : g.s2) {
                            if (t1 == tp || t2 == tp || t1 == t2) continue;
                            const auto H = masks(without(uni, {t1, t2, tp}));
                            const std::uint32_t U = tmask(t1) | tmask(t2);
                            bool empty_inside = true;
                            for (auto b : H) empty_inside = empty_inside && (b & ~U) != 0;
                            if (!empty_inside) continue;
                            record(dbl, kappa_masks(H, all, U) == 0, [&] {
                                return describe_gluing(g, " T'=" + describe_blocks({tp}) + " T1=" +
                                                              describe_blocks({t1}) + " T2=" + describe_blocks({t2}));
                            });
                        }
                    }
                }
                // |V(S1) ∩ V(S2)| >= 4, T in S1 other than T': (S1 ∪ S2 - {T, T'}, T) is 0-balanced.
                if (std::popcount(g.v1 & g.v2) >= 4) {
                    for (const auto& t : g.s1) {
                        if (t == tp) continue;
                        const auto H = masks(without(uni, {t, tp}));
                        record(butterfly, kappa_masks(H, all, tmask(t)) == 0, [&] {
                            return describe_gluing(g, " T'=" + describe_blocks({tp}) + " T=" + describe_blocks({t}));
                        });
                    }
                }
            });
        }
    }
    rep.classes = {simple, analysis, overlap4, overlap3, shared, dbl, butterfly};
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace hgsts
