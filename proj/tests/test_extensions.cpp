#include <gtest/gtest.h>

#include <map>

#include "hgsts/extensions.hpp"

using namespace hgsts;

namespace {

std::shared_ptr<const ErdosCatalog> catalog8() {
    static const auto cat = std::make_shared<const ErdosCatalog>(enumerate_erdos(8));
    return cat;
}

TripleSystem random_pattern(int nv, int blocks, Rng& rng) {
    TripleSystem h(nv);
    for (int x = 0; x < 4 * blocks && static_cast<int>(h.size()) < blocks; ++x) {
        const auto a = static_cast<Vertex>(uniform_index(rng, nv));
        const auto b = static_cast<Vertex>(uniform_index(rng, nv));
        const auto c = static_cast<Vertex>(uniform_index(rng, nv));
        if (a != b && b != c && a != c) h.insert(Triple(a, b, c));
    }
    return h;
}

// Oracle: max over sets X of free vertices of |X| - #blocks meeting X.
int brute_kappa(const TripleSystem& h, const std::vector<Vertex>& u) {
    std::vector<Vertex> free;
    for (Vertex v = 0; v < h.n(); ++v)
        if (std::find(u.begin(), u.end(), v) == u.end()) free.push_back(v);
    int best = 0;
    for (std::uint32_t s = 0; s < (1u << free.size()); ++s) {
        std::set<Vertex> x;
        for (std::size_t b = 0; b < free.size(); ++b)
            if (s >> b & 1u) x.insert(free[b]);
        int touching = 0;
        for (const auto& t : h.blocks()) touching += (x.count(t.a) || x.count(t.b) || x.count(t.c)) ? 1 : 0;
        best = std::max(best, static_cast<int>(x.size()) - touching);
    }
    return best;
}

// Oracle: injections of V(H) into V(G) sending U onto R (any order unless `ordered`) and blocks to blocks.
std::uint64_t brute_extensions(const TripleSystem& g, const std::vector<Vertex>& r, const ExtensionType& ext, bool ordered) {
    const int hn = ext.H.n();
    std::vector<Vertex> img(static_cast<std::size_t>(hn), -1);
    std::vector<char> used(static_cast<std::size_t>(g.n()), 0);
    std::uint64_t count = 0;
    std::function<void(int)> rec = [&](int v) {
        if (v == hn) {
            for (const auto& t : ext.H.blocks())
                if (!g.contains(Triple(img[t.a], img[t.b], img[t.c]))) return;
            ++count;
            return;
        }
        const auto pos = std::find(ext.U.begin(), ext.U.end(), v);
        const bool root = pos != ext.U.end();
        for (Vertex w = 0; w < g.n(); ++w) {
            if (used[w]) continue;
            const bool in_r = std::find(r.begin(), r.end(), w) != r.end();
            if (root != in_r) continue;
            if (root && ordered && r[pos - ext.U.begin()] != w) continue;
            used[w] = 1;
            img[v] = w;
            rec(v + 1);
            used[w] = 0;
        }
    };
    rec(0);
    return count;
}

// Oracle: dangerous configurations at T grouped by their available block, as (total, diamonds).
std::map<Triple, std::pair<std::uint64_t, std::uint64_t>> brute_danger(const ProcessState& st, const Triple& t) {
    std::map<Triple, std::pair<std::uint64_t, std::uint64_t>> out;
    const int n = st.n();
    std::vector<Vertex> rest;
    for (Vertex v = 0; v < n; ++v)
        if (!t.contains(v)) rest.push_back(v);
    std::vector<Vertex> w{t.a, t.b, t.c};
    std::function<void(std::size_t)> grow = [&](std::size_t from) {
        const int j = static_cast<int>(w.size());
        if (j >= 4) {
            std::vector<Vertex> ws = w;
            std::sort(ws.begin(), ws.end());
            const auto chosen_in = st.chosen().induced(ws);
            std::vector<Triple> avail_in;
            for (std::size_t a = 0; a < ws.size(); ++a)
                for (std::size_t b = a + 1; b < ws.size(); ++b)
                    for (std::size_t c = b + 1; c < ws.size(); ++c) {
                        const Triple u(ws[a], ws[b], ws[c]);
                        if (u != t && st.is_available(u)) avail_in.push_back(u);
                    }
            const int need = j - 4;
            std::vector<int> pick;
            std::function<void(int)> rec = [&](int f) {
                if (static_cast<int>(pick.size()) == need) {
                    for (const auto& other : avail_in) {
                        std::vector<Triple> bs{t, other};
                        for (int x : pick) bs.push_back(chosen_in[x]);
                        TripleSystem s{n, bs};
                        if (static_cast<int>(s.points().size()) == j && is_erdos(s).erdos) {
                            out[other].first += 1;
                            out[other].second += j == 4 ? 1 : 0;
                        }
                    }
                    return;
                }
                for (int x = f; x < static_cast<int>(chosen_in.size()); ++x) {
                    pick.push_back(x);
                    rec(x + 1);
                    pick.pop_back();
                }
            };
            rec(0);
        }
        if (j == st.j_max()) return;
        for (std::size_t x = from; x < rest.size(); ++x) {
            w.push_back(rest[x]);
            grow(x + 1);
            w.pop_back();
        }
    };
    grow(0);
    return out;
}

}  // namespace

TEST(Kappa, KnownPatterns) {
    const TripleSystem one(3, {Triple(0, 1, 2)});
    EXPECT_EQ(kappa_matching(one, {}), 2);
    EXPECT_EQ(kappa_matching(one, {0}), 1);
    EXPECT_EQ(kappa_matching(one, {0, 1}), 0);
    const auto pasch = from_digits(6, "034,135,245");
    EXPECT_EQ(kappa_matching(pasch, {0, 1, 2}), 0);
    EXPECT_THROW(kappa_matching(from_digits(6, "012,034"), {0, 1, 2}), InvalidArgument);
    EXPECT_EQ(kappa_matching(TripleSystem(4), {0}), 3);
    const auto ext = make_extension_type(pasch, {2, 0, 1});
    EXPECT_EQ(ext.ell, 3);
    EXPECT_EQ(ext.U, (std::vector<Vertex>{0, 1, 2}));
}

TEST(Kappa, ThreeComputationsAgreeWithOracle) {
    Rng rng(5);
    for (int rep = 0; rep < 300; ++rep) {
        const int nv = 3 + static_cast<int>(uniform_index(rng, 8));
        const auto raw = random_pattern(nv, static_cast<int>(uniform_index(rng, 6)), rng);
        std::vector<Vertex> u;
        for (Vertex v = 0; v < nv; ++v)
            if (uniform_index(rng, 3) == 0) u.push_back(v);
        TripleSystem h(nv);
        for (const auto& t : raw.blocks()) {
            auto in_u = [&](Vertex v) { return std::find(u.begin(), u.end(), v) != u.end(); };
            if (!(in_u(t.a) && in_u(t.b) && in_u(t.c))) h.insert(t);
        }
        const int want = brute_kappa(h, u);
        ASSERT_EQ(compute_kappa(h, u), want) << rep;
        ASSERT_EQ(kappa_direct(h, u), want) << rep;
        ASSERT_EQ(kappa_matching(h, u), want) << rep;
    }
}

TEST(Kappa, RejectsBadRoots) {
    const TripleSystem one(3, {Triple(0, 1, 2)});
    EXPECT_THROW(kappa_matching(one, {5}), InvalidArgument);
    EXPECT_THROW(kappa_matching(one, {1, 1}), InvalidArgument);
}

TEST(CountExtensions, MatchesInjectionOracle) {
    Rng rng(17);
    for (int rep = 0; rep < 60; ++rep) {
        const int n = 7 + static_cast<int>(uniform_index(rng, 3));
        const auto g = random_pattern(n, 10 + static_cast<int>(uniform_index(rng, 10)), rng);
        const int hn = 3 + static_cast<int>(uniform_index(rng, 3));
        const auto h = random_pattern(hn, 1 + static_cast<int>(uniform_index(rng, 3)), rng);
        const int nu = static_cast<int>(uniform_index(rng, 3));
        std::vector<Vertex> u;
        for (int x = 0; x < nu; ++x) u.push_back(x);
        std::vector<Vertex> r;
        while (static_cast<int>(r.size()) < nu) {
            const auto v = static_cast<Vertex>(uniform_index(rng, n));
            if (std::find(r.begin(), r.end(), v) == r.end()) r.push_back(v);
        }
        const auto ext = make_extension_type(h, u);
        EXPECT_EQ(count_extensions(g, r, ext), brute_extensions(g, r, ext, false)) << rep;
        EXPECT_EQ(count_extensions(g, r, ext, true), brute_extensions(g, r, ext, true)) << rep;
    }
}

TEST(CountExtensions, RootCountMismatchThrows) {
    const auto ext = make_extension_type(TripleSystem(3, {Triple(0, 1, 2)}), {0});
    EXPECT_THROW(count_extensions(TripleSystem(5), {0, 1}, ext), InvalidArgument);
}

TEST(DangerCounts, DoubleAndPairMatchOracle) {
    std::uint64_t doubles_seen = 0;
    std::uint64_t nondiamond_pairs_seen = 0;
    for (int k : {4, 6}) {
        for (std::uint64_t seed = 1; seed <= 4; ++seed) {
            ProcessState st(11, k, seed, catalog8());
            StopCondition stop;
            stop.max_steps = 9;
            run(st, stop);
            const auto avail = st.available_list();
            std::map<Triple, std::map<Triple, std::pair<std::uint64_t, std::uint64_t>>> brute;
            for (const auto& t : avail) brute[t] = brute_danger(st, t);
            for (const auto& t : avail) {
                std::uint64_t want = 0;
                for (const auto& [o, zd] : brute[t]) want += zd.first * (zd.first - 1) / 2;
                ASSERT_EQ(count_double(st, t), want);
                doubles_seen += want;
                const auto prof = st.danger_profile(t);
                for (const auto& e : prof.entries) {
                    ASSERT_EQ(e.total, brute[t][e.other].first);
                    ASSERT_EQ(e.diamonds, brute[t][e.other].second);
                }
            }
            for (std::size_t a = 0; a < avail.size() && a < 25; ++a) {
                for (std::size_t b = a + 1; b < avail.size() && b < 25; ++b) {
                    std::uint64_t want = 0;
                    for (const auto& [o, z1] : brute[avail[a]]) {
                        const auto it = brute[avail[b]].find(o);
                        if (it != brute[avail[b]].end()) want += z1.first * it->second.first - z1.second * it->second.second;
                    }
                    ASSERT_EQ(count_pair(st, avail[a], avail[b]), want);
                    nondiamond_pairs_seen += want;
                }
            }
        }
    }
    EXPECT_GT(doubles_seen, 0u);
    EXPECT_GT(nondiamond_pairs_seen, 0u);
}

TEST(DangerCounts, CountPairRejectsEqualTriples) {
    ProcessState st(8, 4, 1, catalog8());
    EXPECT_THROW(count_pair(st, Triple(0, 1, 2), Triple(0, 1, 2)), InvalidArgument);
}

TEST(ThreatCheck, ThresholdMatchesBruteThreats) {
    ProcessState st(11, 5, 3, catalog8());
    StopCondition stop;
    stop.max_steps = 8;
    run(st, stop);
    const auto avail = st.available_list();
    auto brute_threats = [&](const Triple& x) {
        std::set<Triple> out;
        for (const auto& y : avail)
            if (y != x) {
                const auto ex = brute_excluded_by(st, y);
                if (std::binary_search(ex.begin(), ex.end(), x)) out.insert(y);
            }
        return out;
    };
    int checked = 0;
    for (const auto& t : avail) {
        for (std::size_t j = 6; j <= 7 && checked < 30; ++j) {
            for (int c = 0; c <= static_cast<int>(j) - 4 && checked < 30; ++c) {
                for (const auto& s : st.configurations(t, static_cast<int>(j), c)) {
                    const auto chk = erdos_threat_check(st, t, s);
                    std::set<Triple> reach;
                    std::uint64_t sum = 0;
                    for (const auto& b : s) {
                        if (b == t || !st.is_available(b)) continue;
                        const auto th = brute_threats(b);
                        sum += th.size();
                        reach.insert(b);
                        reach.insert(th.begin(), th.end());
                    }
                    reach.erase(t);
                    for (const auto& x : brute_threats(t)) reach.erase(x);
                    EXPECT_EQ(chk.th, reach.size());
                    EXPECT_EQ(chk.threat_sum, sum);
                    ++checked;
                    if (checked >= 30) break;
                }
            }
        }
        if (checked >= 30) break;
    }
    EXPECT_GT(checked, 0);
    const auto some = avail.front();
    EXPECT_THROW(erdos_threat_check(st, some, {}), InvalidArgument);
}

TEST(Balancedness, ExhaustiveChecksForSmallK) {
    const auto cat = enumerate_erdos(7);
    for (int k : {2, 3, 4, 5}) {
        const auto rep = verify_balancedness_props(cat, k);
        EXPECT_TRUE(rep.ok()) << rep.text();
        std::uint64_t inst = 0;
        for (const auto& c : rep.classes) inst += c.instances;
        EXPECT_GT(inst, 0u) << "k=" << k;
    }
}
