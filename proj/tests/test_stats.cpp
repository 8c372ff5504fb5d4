#include <gtest/gtest.h>

#include <map>

#include "hgsts/stats.hpp"

using namespace hgsts;

namespace {

std::shared_ptr<const ErdosCatalog> catalog8() {
    static const auto cat = std::make_shared<const ErdosCatalog>(enumerate_erdos(8));
    return cat;
}

struct TrackedRun {
    Series series;
    std::vector<CensorEvent> censored;
    std::vector<std::multiset<double>> edge_pools;  // X_e over uncovered pairs at each checkpoint
    std::vector<std::size_t> available;
};

TrackedRun tracked_run(int n, int k, std::uint64_t seed, const std::vector<std::int64_t>& cps, int edges, int triples) {
    ProcessState st(n, k, seed, catalog8());
    const Trajectory tr(make_params(n, k, *catalog8()));
    TrackerSpec spec;
    spec.edge_count = edges;
    spec.triple_count = triples;
    spec.checkpoints = cps;
    spec.triple_jc = default_triple_jc(n, k);
    Tracker tk(st, tr, spec, seed + 1);
    TrackedRun out;
    run(st, {}, [&](const ProcessState& s) {
        if (!tk.is_checkpoint(s.i())) return;
        tk.checkpoint();
        std::multiset<double> pool;
        for (Vertex a = 0; a < n; ++a)
            for (Vertex b = a + 1; b < n; ++b) {
                const auto x = count_X_e(s, Pair{a, b});
                if (!x.covered) pool.insert(static_cast<double>(x.value));
            }
        out.edge_pools.push_back(pool);
        out.available.push_back(s.available_count());
    });
    out.series = tk.series();
    out.censored = tk.censored();
    return out;
}

}  // namespace

TEST(EdgeCounts, FreshAndCovered) {
    ProcessState st(9, 4, 1, catalog8());
    EXPECT_EQ(count_X_e(st, Pair{0, 1}).value, 7u);
    st.select(Triple(0, 1, 2));
    EXPECT_TRUE(count_X_e(st, Pair{0, 1}).covered);
    EXPECT_EQ(count_X_e(st, Pair{0, 1}).value, 0u);
    // Pair 0-3: 013 and 023 are gone (share pairs with 012); the diamond rule takes nothing else.
    EXPECT_EQ(count_X_e(st, Pair{0, 3}).value, 5u);
    EXPECT_THROW(count_X_e(st, Pair{0, 9}), InvalidArgument);
    EXPECT_THROW(count_X_Tjc(st, Triple(0, 1, 3), 6, 0), InvalidArgument);
    EXPECT_THROW(count_X_Tjc(st, Triple(3, 4, 5), 7, 0), InvalidArgument);
    EXPECT_EQ(count_X_Tjc(st, Triple(3, 4, 5), 6, 2), 0u);
}

TEST(Identities, HoldAtEveryStepForSmallN) {
    for (int k : {4, 6}) {
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            ProcessState st(12, k, seed, catalog8());
            std::uint64_t checks = 0;
            while (true) {
                const auto rep = check_identities(st);
                ASSERT_TRUE(rep.ok) << "k=" << k << " seed=" << seed << " " << rep.failures.front();
                checks += rep.checks;
                if (st.available_count() == 0) break;
                st.step();
            }
            EXPECT_GT(checks, 100u);
        }
    }
    ProcessState big(15, 4, 1, catalog8());
    EXPECT_THROW(check_identities(big), InvalidArgument);
}

TEST(Tracker, SnapshotsMatchState) {
    const std::vector<std::int64_t> cps{0, 20, 50, 80};
    const auto r = tracked_run(30, 4, 3, cps, 40, 6);
    ASSERT_EQ(r.series.snapshots.size(), cps.size());
    const auto jc = default_triple_jc(30, 4);
    EXPECT_EQ(r.series.columns.size(), 40 + 6 * jc.size());
    for (std::size_t s = 0; s < cps.size(); ++s) {
        const auto& snap = r.series.snapshots[s];
        EXPECT_EQ(snap.i, cps[s]);
        EXPECT_EQ(snap.avail.X, static_cast<double>(r.available[s]));
        auto pool = r.edge_pools[s];
        for (int x = 0; x < 40; ++x) {
            const auto it = pool.find(snap.values[x].X);
            ASSERT_NE(it, pool.end()) << "edge tracker value not an uncovered pair count";
            pool.erase(it);
        }
        for (const auto& v : snap.values) EXPECT_EQ(v.in, std::abs(v.X - v.f) <= v.band);
    }
    EXPECT_FALSE(r.censored.empty());
    for (const auto& c : r.censored) {
        EXPECT_NE(c.old_subject, c.new_subject);
        EXPECT_TRUE(c.slot[0] == 'e' || c.slot[0] == 't');
    }
}

TEST(Tracker, DeterministicForSeed) {
    const auto a = tracked_run(25, 5, 9, {0, 30, 60}, 20, 4);
    const auto b = tracked_run(25, 5, 9, {0, 30, 60}, 20, 4);
    EXPECT_EQ(a.series, b.series);
}

TEST(Tracker, RejectsBadSpecs) {
    ProcessState st(20, 4, 1, catalog8());
    const Trajectory tr(make_params(20, 4, *catalog8()));
    TrackerSpec bad;
    bad.checkpoints = {5, 1};
    EXPECT_THROW(Tracker(st, tr, bad, 1), InvalidArgument);
    TrackerSpec bad_jc;
    bad_jc.triple_jc = {{7, 0}};
    EXPECT_THROW(Tracker(st, tr, bad_jc, 1), InvalidArgument);
    TrackerSpec neg;
    neg.edge_count = -1;
    EXPECT_THROW(Tracker(st, tr, neg, 1), InvalidArgument);
}

TEST(Tracker, DefaultJcCoversAllOnlyForSmallN) {
    EXPECT_EQ(default_triple_jc(40, 6).size(), 3u + 4u + 5u);
    const auto big = default_triple_jc(500, 6);
    EXPECT_EQ(big.size(), 3u);
    for (const auto& [j, c] : big) EXPECT_EQ(c, j - 4);
}

TEST(SeriesCsv, RoundTrip) {
    const auto r = tracked_run(30, 4, 5, {0, 50, 100}, 15, 3);
    const auto text = export_series(r.series);
    EXPECT_NE(text.find("# schema series-csv v1"), std::string::npos);
    EXPECT_EQ(parse_series(text), r.series);
}

TEST(SeriesCsv, RejectsMalformedInput) {
    const auto r = tracked_run(20, 4, 5, {0, 10}, 5, 1);
    const auto text = export_series(r.series);
    const auto body = text.substr(0, text.find("# schema"));
    EXPECT_THROW(parse_series(body), InvalidArgument);
    EXPECT_THROW(parse_series(body + "# schema series-csv v2\n"), InvalidArgument);
    EXPECT_THROW(parse_series(text + "0,1,2,3\n"), InvalidArgument);
    EXPECT_THROW(parse_series("x,avail\n# schema series-csv v1\n"), InvalidArgument);
    EXPECT_THROW(parse_series(""), InvalidArgument);
    EXPECT_THROW(export_series(Series{}), InvalidArgument);
}
