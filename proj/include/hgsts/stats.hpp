#pragma once

// Tracking of the process's random variables against their trajectories, CSV
// export/parse of checkpoint series, and exact structural identities at small n.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hgsts/extensions.hpp"
#include "hgsts/process.hpp"
#include "hgsts/rng.hpp"
#include "hgsts/schema.hpp"
#include "hgsts/trajectory.hpp"

namespace hgsts {

struct EdgeCount {
    std::uint64_t value = 0;
    bool covered = false;
};

/// X_e: available triples containing e. A covered pair reports 0 with the covered flag.
inline EdgeCount count_X_e(const ProcessState& st, Pair e) {
    if (e.a < 0 || e.b >= st.n() || e.a == e.b) throw InvalidArgument("count_X_e: pair out of range");
    if (st.is_covered(e)) return {0, true};
    EdgeCount out;
    for (Vertex w = 0; w < st.n(); ++w) {
        if (w != e.a && w != e.b && st.is_available(Triple{e.a, e.b, w})) ++out.value;
    }
    return out;
}

/// X_{T,j,c}: Erdős configurations on j points through T with c other blocks chosen and the
/// remaining j-3-c available.
inline std::uint64_t count_X_Tjc(const ProcessState& st, const Triple& t, int j, int c) {
    if (!st.is_available(t)) throw InvalidArgument("count_X_Tjc: T must be available");
    if (j < 6 || j > st.j_max()) throw InvalidArgument("count_X_Tjc: j outside [6, j_max]");
    if (c < 0 || c > j - 4) throw InvalidArgument("count_X_Tjc: c outside [0, j-4]");
    return st.count_configurations(t, j, c);
}

// ---------------------------------------------------------------------------

struct TrackerSpec {
    int edge_count = 200;
    int triple_count = 50;
    std::vector<std::int64_t> checkpoints;  // ascending
    /// (j, c) pairs tracked for each sampled triple.
    std::vector<std::pair<int, int>> triple_jc;
    bool record_extensions = false;
};

/// (j, c) pairs tracked by default: all of them for n <= 40, otherwise only the danger counts
/// c = j-4. Any free block makes the count scan the available set, minutes per triple at n = 500.
inline std::vector<std::pair<int, int>> default_triple_jc(int n, int k) {
    std::vector<std::pair<int, int>> out;
    for (int j = 6; j <= k + 2; ++j) {
        for (int c = 0; c <= j - 4; ++c) {
            if (n <= 40 || c == j - 4) out.emplace_back(j, c);
        }
    }
    return out;
}

struct TrackedValue {
    double X = 0;
    double f = 0;
    double band = 0;
    bool in = true;

    friend bool operator==(const TrackedValue&, const TrackedValue&) = default;
};

struct Snapshot {
    std::int64_t i = 0;
    TrackedValue avail;
    std::vector<TrackedValue> values;  // one per series column group, in Series::columns order

    friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

struct CensorEvent {
    std::int64_t i = 0;
    std::string slot;
    std::string old_subject;
    std::string new_subject;
};

/// A checkpoint series: tracker slot names (e.g. "e17", "t3_j6_c2") and one snapshot per checkpoint.
struct Series {
    std::vector<std::string> columns;
    std::vector<Snapshot> snapshots;

    friend bool operator==(const Series&, const Series&) = default;
};

inline std::string pair_str(Pair e) { return std::to_string(e.a) + "-" + std::to_string(e.b); }
inline std::string triple_str(const Triple& t) {
    return std::to_string(t.a) + "-" + std::to_string(t.b) + "-" + std::to_string(t.c);
}

class Tracker {
public:
    Tracker(const ProcessState& st, const Trajectory& tr, TrackerSpec spec, std::uint64_t seed)
        : st_(st), tr_(tr), spec_(std::move(spec)), rng_(seed) {
        if (spec_.edge_count < 0 || spec_.triple_count < 0) throw InvalidArgument("tracker: negative sample size");
        if (!std::is_sorted(spec_.checkpoints.begin(), spec_.checkpoints.end())) {
            throw InvalidArgument("tracker: checkpoints must be ascending");
        }
        for (const auto& [j, c] : spec_.triple_jc) {
            if (j < 6 || j > st.j_max() || c < 0 || c > j - 4) throw InvalidArgument("tracker: (j,c) out of range");
        }
        for (int x = 0; x < spec_.edge_count; ++x) series_.columns.push_back("e" + std::to_string(x));
        for (int x = 0; x < spec_.triple_count; ++x) {
            for (const auto& [j, c] : spec_.triple_jc) {
                series_.columns.push_back("t" + std::to_string(x) + "_j" + std::to_string(j) + "_c" + std::to_string(c));
            }
        }
    }

    [[nodiscard]] const TrackerSpec& spec() const { return spec_; }
    [[nodiscard]] const Series& series() const { return series_; }
    [[nodiscard]] const std::vector<CensorEvent>& censored() const { return censored_; }
    [[nodiscard]] bool is_checkpoint(std::int64_t i) const {
        return std::binary_search(spec_.checkpoints.begin(), spec_.checkpoints.end(), i);
    }

    /// Refreshes trackers whose subject left the tracked population, then measures.
    const Snapshot& checkpoint() {
        const auto i = st_.i();
        refresh_edges(i);
        refresh_triples(i);
        const double di = static_cast<double>(i);
        const double eps = tr_.eps(di);
        const double n = st_.n();
        Snapshot s;
        s.i = i;
        s.avail = measure(static_cast<double>(st_.available_count()), tr_.A_traj(di), eps * n * n * n);
        const double fe = tr_.f_edge(di);
        for (const auto& e : edges_) s.values.push_back(measure(static_cast<double>(count_X_e(st_, e).value), fe, eps * n));
        for (const auto& t : triples_) {
            for (const auto& [j, c] : spec_.triple_jc) {
                const double band = eps * std::pow(n, j - 3 - c);
                s.values.push_back(measure(static_cast<double>(count_X_Tjc(st_, t, j, c)), tr_.f_jc(di, j, c), band));
            }
        }
        series_.snapshots.push_back(std::move(s));
        return series_.snapshots.back();
    }

    /// Fraction of edge trackers in band at a snapshot (1 if there are none).
    [[nodiscard]] double edge_in_band_fraction(const Snapshot& s) const {
        int in = 0;
        for (int x = 0; x < spec_.edge_count; ++x) in += s.values[x].in ? 1 : 0;
        return spec_.edge_count == 0 ? 1.0 : static_cast<double>(in) / spec_.edge_count;
    }

private:
    static TrackedValue measure(double x, double f, double band) { return {x, f, band, std::abs(x - f) <= band}; }

    void refresh_edges(std::int64_t i) {
        if (spec_.edge_count == 0) return;
        std::vector<Pair> pool;
        std::set<Pair> current(edges_.begin(), edges_.end());
        for (Vertex a = 0; a < st_.n(); ++a) {
            for (Vertex b = a + 1; b < st_.n(); ++b) {
                const Pair e{a, b};
                if (!st_.is_covered(e) && !current.count(e)) pool.push_back(e);
            }
        }
        auto draw = [&]() {
            if (pool.empty()) throw std::runtime_error("tracker: not enough uncovered pairs to sample");
            const auto x = uniform_index(rng_, pool.size());
            const Pair e = pool[x];
            pool[x] = pool.back();
            pool.pop_back();
            return e;
        };
        if (edges_.empty()) {
            for (int x = 0; x < spec_.edge_count; ++x) edges_.push_back(draw());
            return;
        }
        for (std::size_t x = 0; x < edges_.size(); ++x) {
            if (!st_.is_covered(edges_[x])) continue;
            const Pair e = draw();
            censored_.push_back({i, "e" + std::to_string(x), pair_str(edges_[x]), pair_str(e)});
            edges_[x] = e;
        }
    }

    Triple draw_available(const std::set<Triple>& exclude) {
        if (st_.available_count() <= exclude.size()) throw std::runtime_error("tracker: not enough available triples");
        const auto total = binom(st_.n(), 3);
        // Rejection over all triples while availability is not too sparse, else from the list.
        if (st_.available_count() * 64 >= total) {
            while (true) {
                const auto t = triple_unrank(static_cast<std::uint32_t>(uniform_index(rng_, total)));
                if (st_.is_available(t) && !exclude.count(t)) return t;
            }
        }
        std::vector<Triple> pool;
        for (const auto& t : st_.available_list()) {
            if (!exclude.count(t)) pool.push_back(t);
        }
        return pool[uniform_index(rng_, pool.size())];
    }

    void refresh_triples(std::int64_t i) {
        if (spec_.triple_count == 0) return;
        std::set<Triple> current(triples_.begin(), triples_.end());
        if (triples_.empty()) {
            for (int x = 0; x < spec_.triple_count; ++x) {
                const auto t = draw_available(current);
                current.insert(t);
                triples_.push_back(t);
            }
            return;
        }
        for (std::size_t x = 0; x < triples_.size(); ++x) {
            if (st_.is_available(triples_[x])) continue;
            const auto t = draw_available(current);
            current.insert(t);
            censored_.push_back({i, "t" + std::to_string(x), triple_str(triples_[x]), triple_str(t)});
            triples_[x] = t;
        }
    }

    const ProcessState& st_;
    const Trajectory& tr_;
    TrackerSpec spec_;
    Rng rng_;
    std::vector<Pair> edges_;
    std::vector<Triple> triples_;
    Series series_;
    std::vector<CensorEvent> censored_;
};

// ---------------------------------------------------------------------------
// CSV schema v1 (trailing schema line): i,avail,avail_traj,avail_band then <slot>_X,<slot>_f,<slot>_band,<slot>_in.

inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string export_series(const Series& s) {
    if (s.snapshots.empty()) throw InvalidArgument("export_series: no snapshots");
    std::ostringstream os;
    os << "i,avail,avail_traj,avail_band";
    for (const auto& c : s.columns) os << ',' << c << "_X," << c << "_f," << c << "_band," << c << "_in";
    os << '\n';
    for (const auto& snap : s.snapshots) {
        if (snap.values.size() != s.columns.size()) throw InvalidArgument("export_series: snapshot width mismatch");
        os << snap.i << ',' << format_double(snap.avail.X) << ',' << format_double(snap.avail.f) << ','
           << format_double(snap.avail.band);
        for (const auto& v : snap.values) {
            os << ',' << format_double(v.X) << ',' << format_double(v.f) << ',' << format_double(v.band) << ','
               << (v.in ? 1 : 0);
        }
        os << '\n';
    }
    os << schema_line("series-csv");
    return os.str();
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(line);
    while (std::getline(is, cur, ',')) out.push_back(cur);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

/// Inverse of export_series. The avail in-band flag is recomputed from its three columns.
inline Series parse_series(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) throw InvalidArgument("parse_series: empty input");
    const auto head = split_csv_line(line);
    if (head.size() < 4 || head[0] != "i" || head[1] != "avail" || head[2] != "avail_traj" ||
        head[3] != "avail_band" || (head.size() - 4) % 4 != 0) {
        throw InvalidArgument("parse_series: unrecognised header");
    }
    Series s;
    for (std::size_t x = 4; x < head.size(); x += 4) {
        const auto& h = head[x];
        if (h.size() < 3 || h.substr(h.size() - 2) != "_X") throw InvalidArgument("parse_series: bad column " + h);
        s.columns.push_back(h.substr(0, h.size() - 2));
    }
    bool trailer = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (trailer) throw InvalidArgument("parse_series: content after schema line");
        if (detail::consume_schema_line(line, "series-csv")) {
            trailer = true;
            continue;
        }
        const auto cells = split_csv_line(line);
        if (cells.size() != head.size()) throw InvalidArgument("parse_series: row width mismatch");
        Snapshot snap;
        snap.i = std::stoll(cells[0]);
        snap.avail.X = std::stod(cells[1]);
        snap.avail.f = std::stod(cells[2]);
        snap.avail.band = std::stod(cells[3]);
        snap.avail.in = std::abs(snap.avail.X - snap.avail.f) <= snap.avail.band;
        for (std::size_t x = 4; x < cells.size(); x += 4) {
            TrackedValue v;
            v.X = std::stod(cells[x]);
            v.f = std::stod(cells[x + 1]);
            v.band = std::stod(cells[x + 2]);
            v.in = cells[x + 3] == "1";
            snap.values.push_back(v);
        }
        s.snapshots.push_back(std::move(snap));
    }
    if (!trailer) throw InvalidArgument("parse_series: missing schema line");
    return s;
}

// ---------------------------------------------------------------------------

struct IdentityReport {
    bool ok = true;
    std::uint64_t checks = 0;
    std::vector<std::string> failures;

    void expect(bool cond, const std::string& what) {
        ++checks;
        if (!cond) {
            ok = false;
            if (failures.size() < 20) failures.push_back(what);
        }
    }
};

/// Exact identities over the full populations (n <= 14): available count vs. edge counts,
/// the diamond count, the edge-threat identity against brute-force threats, the danger-count
/// sandwich, and the uncovered-pair count.
inline IdentityReport check_identities(const ProcessState& st) {
    if (st.n() > 14) throw InvalidArgument("check_identities: n must be at most 14");
    IdentityReport rep;
    const int n = st.n();
    const auto i = st.i();
    std::uint64_t sum_x = 0;
    std::uint64_t uncovered = 0;
    for (Vertex a = 0; a < n; ++a) {
        for (Vertex b = a + 1; b < n; ++b) {
            const auto x = count_X_e(st, Pair{a, b});
            if (!x.covered) {
                ++uncovered;
                sum_x += x.value;
            }
        }
    }
    rep.expect(sum_x == 3 * st.available_count(), "i=" + std::to_string(i) + ": 3|A| != sum X_e");
    rep.expect(uncovered == binom(n, 2) - 3 * static_cast<std::uint64_t>(i),
               "i=" + std::to_string(i) + ": |E(i)| != C(n,2)-3i");
    rep.expect(uncovered == st.uncovered_count(), "i=" + std::to_string(i) + ": uncovered counter drift");
    for (const auto& t : st.available_list()) {
        const auto tag = "i=" + std::to_string(i) + " T=" + triple_str(t);
        std::uint64_t xs = 0;
        for (const auto& e : t.pairs()) xs += count_X_e(st, e).value;
        rep.expect(st.count_configurations(t, 4, 0) == xs - 3, tag + ": X_{T,4,0} != sum X_e - 3");

        const auto threats = brute_excluded_by(st, t);
        const auto engine = st.threats_of(t);
        rep.expect(threats == engine, tag + ": threats_of differs from brute force");
        for (const auto& e : t.pairs()) {
            std::uint64_t th = 0;
            for (const auto& ts : threats) th += ts.contains(e) ? 0 : 1;
            const auto xe = count_X_e(st, e).value;
            rep.expect(th + xe == threats.size() + 1, tag + " e=" + pair_str(e) + ": th_{T,e} != |T_T| - X_e + 1");
        }

        std::uint64_t dangers = 0;
        for (int j = 4; j <= st.j_max(); ++j) dangers += st.count_configurations(t, j, j - 4);
        const auto dbl = count_double(st, t);
        rep.expect(dangers >= threats.size() && dangers - threats.size() <= 2 * dbl,
                   tag + ": danger count outside [|T_T|, |T_T| + 2 X_double]");
    }
    return rep;
}

}  // namespace hgsts
