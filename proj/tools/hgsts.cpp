// hgsts: batch harness for the sparse triple-system removal process and related tools.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hgsts/configs.hpp"
#include "hgsts/general_designs.hpp"
#include "hgsts/io.hpp"
#include "hgsts/process.hpp"
#include "hgsts/sparse_check.hpp"
#include "hgsts/stats.hpp"
#include "hgsts/trajectory.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace hgsts;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitTargetMissed = 2;
constexpr int kExitVerifyFailed = 3;
constexpr int kExitConfig = 4;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string default_out_dir() {
    const char* env = std::getenv("STS_OUT_DIR");
    return env != nullptr && *env != '\0' ? env : ".";
}

void write_file(const fs::path& p, const std::string& text) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream os(p, std::ios::binary);
    if (!os) throw ConfigError("cannot write " + p.string());
    os << text;
    if (!os) throw ConfigError("write failed for " + p.string());
}

std::string read_file(const std::string& p) {
    std::ifstream is(p, std::ios::binary);
    if (!is) throw ConfigError("cannot read " + p);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::shared_ptr<const ErdosCatalog> load_catalog(const std::string& file, int need_j) {
    std::shared_ptr<const ErdosCatalog> cat;
    if (!file.empty()) {
        cat = std::make_shared<const ErdosCatalog>(read_catalog(read_file(file)));
    } else {
        if (need_j > ErdosCatalog::kMaxJ) throw ConfigError("k+2 exceeds the largest supported catalog size 10");
        cat = std::make_shared<const ErdosCatalog>(enumerate_erdos(std::max(need_j, 4)));
    }
    if (cat->j_max() < need_j) throw ConfigError("catalog does not cover k+2 = " + std::to_string(need_j));
    return cat;
}

std::string triple_text(const Triple& t) {
    return std::to_string(t.a) + " " + std::to_string(t.b) + " " + std::to_string(t.c);
}

std::vector<double> parse_fractions(const std::string& s) {
    std::vector<double> out;
    std::istringstream is(s);
    std::string part;
    while (std::getline(is, part, ',')) {
        try {
            std::size_t used = 0;
            const double f = std::stod(part, &used);
            if (used != part.size() || !(f > 0 && f <= 1)) throw std::invalid_argument("");
            out.push_back(f);
        } catch (const std::exception&) {
            throw ConfigError("checkpoint fractions must lie in (0, 1]: " + s);
        }
    }
    if (out.empty()) throw ConfigError("no checkpoint fractions given");
    return out;
}

// ---------------------------------------------------------------------------

struct CatalogOpts {
    int jmax = 8;
    std::string out;
    std::string out_dir;
};

int cmd_catalog(const CatalogOpts& o) {
    if (o.jmax < 4 || o.jmax > ErdosCatalog::kMaxJ) throw ConfigError("--jmax must lie in [4, 10]");
    const auto cat = enumerate_erdos(o.jmax);
    const auto text = write_catalog(cat);
    if (!(read_catalog(text).serialize() == cat.serialize())) {
        std::cerr << "catalog round trip mismatch\n";
        return kExitVerifyFailed;
    }
    const fs::path path = o.out.empty() ? fs::path(o.out_dir) / ("catalog_j" + std::to_string(o.jmax) + ".txt") : fs::path(o.out);
    write_file(path, text);
    std::cout << "j  count  erd  names\n";
    for (int j = 4; j <= o.jmax; ++j) {
        std::string names;
        for (const auto* e : cat.entries_for(j)) {
            if (!e->name.empty()) names += (names.empty() ? "" : ",") + e->name;
        }
        std::cout << j << "  " << cat.count(j) << "  " << cat.erd(j) << "  " << (names.empty() ? "-" : names) << '\n';
    }
    std::cout << "wrote " << path.string() << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct RunOpts {
    int n = 0;
    int k = 4;
    double gamma = 0.15;
    std::uint64_t seed = 1;
    TrackingConstants constants;
    int edges = 200;
    int triples = 50;
    std::string checkpoints = "0.25,0.5,0.75";
    bool no_track = false;
    double max_seconds = -1;
    std::string catalog;
    std::string out_dir;
};

std::int64_t target_steps(int n, double gamma) {
    return static_cast<std::int64_t>(std::ceil((1.0 - gamma) * n * static_cast<double>(n) / 6.0 - 1e-9));
}

int cmd_run(const RunOpts& o) {
    if (!(o.gamma > 0 && o.gamma < 1)) throw ConfigError("--gamma must lie in (0, 1)");
    if (o.n < 6 || o.n > ProcessState::kMaxN) throw ConfigError("--n must lie in [6, 1000]");
    if (o.k < 2) throw ConfigError("--k must be at least 2");
    const auto cat = load_catalog(o.catalog, o.k + 2);
    ProcessState st(o.n, o.k, o.seed, cat);

    std::unique_ptr<Trajectory> tr;
    std::unique_ptr<Tracker> tracker;
    std::vector<std::int64_t> cps;
    if (!o.no_track) {
        tr = std::make_unique<Trajectory>(make_params(o.n, o.k, *cat, o.constants));
        if (tr->band_margin() <= 0) {
            throw ConfigError("tracking constants unusable at this n: f_edge(tau_cut) <= eps(tau_cut) n");
        }
        for (double f : parse_fractions(o.checkpoints)) {
            const auto cp = static_cast<std::int64_t>(std::floor(f * static_cast<double>(tr->tau_cut())));
            if (cps.empty() || cps.back() < cp) cps.push_back(cp);
        }
        std::sort(cps.begin(), cps.end());
        cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
        const double uncovered_last = binom_real(o.n, 2) - 3.0 * static_cast<double>(cps.back());
        if (o.edges < 0 || o.triples < 0) throw ConfigError("tracker sizes must be non-negative");
        if (o.edges > uncovered_last / 2) throw ConfigError("--edges too large for n: fewer uncovered pairs expected");
        TrackerSpec spec;
        spec.edge_count = o.edges;
        spec.triple_count = o.triples;
        spec.checkpoints = cps;
        spec.triple_jc = default_triple_jc(o.n, o.k);
        tracker = std::make_unique<Tracker>(st, *tr, spec, derive_seed(o.seed, 1));
    }
    StopCondition stop;
    stop.max_seconds = o.max_seconds;
    const auto sum = run(st, stop, [&](const ProcessState& s) {
        if (tracker && tracker->is_checkpoint(s.i())) tracker->checkpoint();
    });

    const auto target = target_steps(o.n, o.gamma);
    const bool reached = sum.steps >= target;
    const std::string stem = "run_n" + std::to_string(o.n) + "_k" + std::to_string(o.k) + "_s" + std::to_string(o.seed);
    const fs::path dir(o.out_dir);
    write_file(dir / (stem + ".sts"), write_sts(st.chosen()));

    json j;
    j["schema"] = "run-json v1";
    j["command"] = "run";
    j["seed"] = o.seed;
    j["params"] = {{"n", o.n},
                   {"k", o.k},
                   {"gamma", o.gamma},
                   {"track_gamma", o.constants.gamma},
                   {"C", o.constants.C},
                   {"eps0", o.constants.eps0},
                   {"edges", o.edges},
                   {"triples", o.triples},
                   {"tracking", !o.no_track}};
    j["final_tau"] = sum.steps;
    j["target_steps"] = target;
    j["reached_target"] = reached;
    j["exhausted"] = sum.exhausted;
    j["stopped_by_budget"] = !sum.exhausted;
    j["available_left"] = sum.available_left;
    j["uncovered_left"] = sum.uncovered_left;
    j["system_file"] = stem + ".sts";
    if (tracker) {
        const auto& series = tracker->series();
        j["tau_cut"] = tr->tau_cut();
        j["checkpoints"] = cps;
        j["csv_file"] = stem + ".csv";
        j["csv_schema"] = "series-csv v1";
        json cp_list = json::array();
        json violations = json::array();
        std::uint64_t violation_total = 0;
        for (const auto& snap : series.snapshots) {
            cp_list.push_back({{"i", snap.i},
                               {"avail_in_band", snap.avail.in},
                               {"edge_in_band_fraction", tracker->edge_in_band_fraction(snap)}});
            if (!snap.avail.in) {
                ++violation_total;
                violations.push_back({{"i", snap.i}, {"slot", "avail"}, {"X", snap.avail.X}, {"f", snap.avail.f}, {"band", snap.avail.band}});
            }
            for (std::size_t x = 0; x < snap.values.size(); ++x) {
                const auto& v = snap.values[x];
                if (v.in) continue;
                ++violation_total;
                if (violations.size() < 1000) {
                    violations.push_back({{"i", snap.i}, {"slot", series.columns[x]}, {"X", v.X}, {"f", v.f}, {"band", v.band}});
                }
            }
        }
        j["checkpoint_summary"] = cp_list;
        j["missed_checkpoints"] = cps.size() - series.snapshots.size();
        j["violation_count"] = violation_total;
        j["violations"] = violations;
        j["censor_events"] = tracker->censored().size();
        if (!series.snapshots.empty()) write_file(dir / (stem + ".csv"), export_series(series));
    }
    write_file(dir / (stem + ".json"), j.dump(2) + "\n");
    std::cout << j.dump(2) << '\n';
    return reached ? kExitOk : kExitTargetMissed;
}

// ---------------------------------------------------------------------------

struct TrialsOpts {
    int n = 0;
    int k = 4;
    int trials = 10;
    std::uint64_t master_seed = 1;
    double gamma = 0.15;
    int jobs = 1;
    std::uint64_t samples = 2000;
    std::string catalog;
    std::string out;
    std::string out_dir;
};

int cmd_trials(const TrialsOpts& o) {
    if (!(o.gamma > 0 && o.gamma < 1)) throw ConfigError("--gamma must lie in (0, 1)");
    if (o.n < 6 || o.n > ProcessState::kMaxN) throw ConfigError("--n must lie in [6, 1000]");
    if (o.trials < 1) throw ConfigError("--trials must be positive");
    if (o.jobs < 1) throw ConfigError("--jobs must be positive");
    if (o.k < 2) throw ConfigError("--k must be at least 2");
    const auto cat = load_catalog(o.catalog, o.k + 2);
    struct Outcome {
        std::uint64_t seed = 0;
        std::int64_t steps = 0;
        bool sparse = true;
        std::string error;
    };
    std::vector<Outcome> out(static_cast<std::size_t>(o.trials));
    auto work = [&](int t) {
        auto& r = out[static_cast<std::size_t>(t)];
        r.seed = derive_seed(o.master_seed, static_cast<std::uint64_t>(t));
        try {
            ProcessState st(o.n, o.k, r.seed, cat);
            r.steps = run(st, {}).steps;
            const auto sys = st.chosen();
            const bool small = o.n <= 14;
            r.sparse = small ? is_k_sparse(sys, o.k).ok : sampled_sparseness(sys, o.k, o.samples, r.seed).ok;
        } catch (const std::exception& e) {
            r.error = e.what();
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < o.jobs; ++w) {
        pool.emplace_back([&, w] {
            for (int t = w; t < o.trials; t += o.jobs) work(t);
        });
    }
    for (auto& th : pool) th.join();

    const auto target = target_steps(o.n, o.gamma);
    const double scale = o.n * static_cast<double>(o.n) / 6.0;
    int success = 0;
    std::uint64_t violations = 0;
    double sum = 0;
    double lo = 1e300;
    double hi = -1e300;
    json runs = json::array();
    for (const auto& r : out) {
        if (!r.error.empty()) throw std::runtime_error("trial failed: " + r.error);
        const double d = static_cast<double>(r.steps) / scale;
        sum += d;
        lo = std::min(lo, d);
        hi = std::max(hi, d);
        success += r.steps >= target ? 1 : 0;
        violations += r.sparse ? 0 : 1;
        runs.push_back({{"seed", r.seed}, {"steps", r.steps}, {"density", d}, {"reached_target", r.steps >= target}, {"sparse", r.sparse}});
    }
    json j;
    j["schema"] = "trials-json v1";
    j["command"] = "trials";
    j["params"] = {{"n", o.n}, {"k", o.k}, {"gamma", o.gamma}, {"trials", o.trials}, {"master_seed", o.master_seed}};
    j["target_steps"] = target;
    j["success_fraction"] = static_cast<double>(success) / o.trials;
    j["successes"] = success;
    j["mean_density"] = sum / o.trials;
    j["min_density"] = lo;
    j["max_density"] = hi;
    j["sparseness_violations"] = violations;
    j["runs"] = runs;
    const fs::path path = o.out.empty() ? fs::path(o.out_dir) / ("trials_n" + std::to_string(o.n) + "_k" + std::to_string(o.k) +
                                                                  "_m" + std::to_string(o.master_seed) + ".json")
                                        : fs::path(o.out);
    write_file(path, j.dump(2) + "\n");
    std::cout << j.dump(2) << '\n';
    if (violations > 0) return kExitVerifyFailed;
    return success == o.trials ? kExitOk : kExitTargetMissed;
}

// ---------------------------------------------------------------------------

struct VerifyOpts {
    std::string file;
    int k = 4;
    double budget = kDefaultSparseBudget;
    std::uint64_t samples = 20000;
    std::uint64_t seed = 1;
};

int cmd_verify(const VerifyOpts& o) {
    if (o.k < 2) throw ConfigError("--k must be at least 2");
    const auto text = read_file(o.file);
    if (text.rfind("qsys", 0) == 0) {
        const auto s = read_qsys(text);
        bool ok = s.is_partial();
        std::cout << "format=qsys n=" << s.n << " q=" << s.q << " r=" << s.r << " blocks=" << s.blocks.size() << '\n';
        std::cout << "partial_steiner=" << (ok ? "yes" : "no") << '\n';
        WeakSparsenessReport rep;
        try {
            rep = is_weakly_k_sparse(s, o.k, o.budget);
        } catch (const BudgetExceeded&) {
            rep = sampled_weak_sparseness(s, o.k, o.samples, o.seed);
        }
        std::cout << "weakly_" << o.k << "_sparse=" << (rep.ok ? "yes" : "no") << " mode=" << (rep.exhaustive ? "exhaustive" : "sampled") << '\n';
        if (!rep.ok) {
            std::cout << "witness points:";
            for (auto v : rep.witness_vertices) std::cout << ' ' << v;
            std::cout << "\nwitness blocks:";
            for (const auto& b : rep.witness_blocks) {
                std::cout << ' ';
                for (std::size_t x = 0; x < b.size(); ++x) std::cout << (x ? "," : "") << b[x];
            }
            std::cout << '\n';
        }
        ok = ok && rep.ok;
        std::cout << (ok ? "OK" : "FAIL") << '\n';
        return ok ? kExitOk : kExitVerifyFailed;
    }
    const auto s = read_sts(text);
    const bool linear = is_partial_steiner(s);
    const bool complete = linear && s.size() * 3 == binom(s.n(), 2);
    std::cout << "format=sts n=" << s.n() << " blocks=" << s.size() << '\n';
    std::cout << "partial_steiner=" << (linear ? "yes" : "no") << " complete=" << (complete ? "yes" : "no") << '\n';
    SparsenessReport rep;
    try {
        rep = is_k_sparse(s, o.k, o.budget);
    } catch (const BudgetExceeded&) {
        rep = sampled_sparseness(s, o.k, o.samples, o.seed);
    }
    std::cout << o.k << "_sparse=" << (rep.ok ? "yes" : "no") << " mode=" << (rep.exhaustive ? "exhaustive" : "sampled") << '\n';
    if (!rep.ok && rep.witness) {
        std::cout << "witness: " << rep.witness->blocks.size() << " blocks on " << rep.witness->vertices.size() << " points:";
        for (const auto& t : rep.witness->blocks) std::cout << " {" << triple_text(t) << "}";
        std::cout << '\n';
    }
    const bool ok = linear && rep.ok;
    std::cout << (ok ? "OK" : "FAIL") << '\n';
    return ok ? kExitOk : kExitVerifyFailed;
}

// ---------------------------------------------------------------------------

struct TrajectoryOpts {
    int n = 0;
    int k = 4;
    int grid = 100;
    TrackingConstants constants;
    std::string catalog;
    std::string out;
    std::string out_dir;
};

int cmd_trajectory(const TrajectoryOpts& o) {
    if (o.grid < 1) throw ConfigError("--grid must be positive");
    if (o.n < 6) throw ConfigError("--n must be at least 6");
    const auto cat = load_catalog(o.catalog, o.k + 2);
    const Trajectory tr(make_params(o.n, o.k, *cat, o.constants));
    std::vector<double> grid;
    const double tc = static_cast<double>(tr.tau_cut());
    for (int t = 1; t <= o.grid; ++t) grid.push_back(t * tc / (o.grid + 1));
    const fs::path path = o.out.empty() ? fs::path(o.out_dir) / ("trajectory_n" + std::to_string(o.n) + "_k" + std::to_string(o.k) + ".csv")
                                        : fs::path(o.out);
    write_file(path, trajectory_csv(tr, grid));
    std::cout << "wrote " << path.string() << " rows=" << grid.size() << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct DesignOpts {
    int n = 40;
    int q = 4;
    int r = 2;
    int k = 3;
    double gamma = 0.3;
    double theta = 0.5;
    std::uint64_t seed = 1;
    int passes = 20;
    int budget = 1000;
    double eps_degree = 0.5;
    std::string mode = "local";
    std::string out;
    std::string out_dir;
};

int cmd_design(const DesignOpts& o) {
    SparsifyOptions so;
    so.budget = o.budget;
    so.eps_degree = o.eps_degree;
    if (o.mode == "local") so.mode = ResampleMode::local;
    else if (o.mode == "full") so.mode = ResampleMode::full;
    else throw ConfigError("--mode must be local or full");
    if (!(o.n > o.q && o.q > o.r && o.r >= 2)) throw ConfigError("need n > q > r >= 2");
    if (!theta_feasible(o.q, o.r, o.k, o.theta)) throw ConfigError("--theta violates the feasibility condition for (q, r, k)");
    WeakSparseBuild b;
    try {
        b = build_weak_sparse(o.n, o.q, o.r, o.k, o.gamma, o.theta, o.seed, so, o.passes);
    } catch (const BudgetExhausted& e) {
        std::cerr << e.what() << '\n';
        return kExitTargetMissed;
    }
    WeakSparsenessReport rep;
    try {
        rep = is_weakly_k_sparse(b.system, o.k);
    } catch (const BudgetExceeded&) {
        rep = sampled_weak_sparseness(b.system, o.k, 20000, o.seed);
    }
    const std::string stem = "design_n" + std::to_string(o.n) + "_q" + std::to_string(o.q) + "_r" + std::to_string(o.r) + "_k" +
                             std::to_string(o.k) + "_s" + std::to_string(o.seed);
    const fs::path path = o.out.empty() ? fs::path(o.out_dir) / (stem + ".qsys") : fs::path(o.out);
    write_file(path, write_qsys(b.system));
    json j;
    j["schema"] = "design-json v1";
    j["command"] = "design";
    j["params"] = {{"n", o.n}, {"q", o.q}, {"r", o.r}, {"k", o.k}, {"gamma", o.gamma}, {"theta", o.theta}, {"seed", o.seed}, {"mode", o.mode}, {"passes", o.passes}};
    j["p"] = b.sparsify.p;
    j["resample_rounds"] = b.sparsify.rounds;
    j["resampled_sets"] = b.sparsify.resampled_sets;
    j["sparsified_blocks"] = b.sparsify.blocks;
    j["degree_target"] = b.sparsify.degree_target;
    j["degree_violations"] = b.sparsify.degree_violations;
    j["codegree_violations"] = b.sparsify.codegree_violations;
    j["blocks"] = b.system.blocks.size();
    j["target_blocks"] = b.target_blocks;
    j["coverage"] = b.matching.coverage;
    j["target_met"] = b.target_met;
    j["partial_steiner"] = b.system.is_partial();
    j["weakly_sparse"] = rep.ok;
    j["sparseness_mode"] = rep.exhaustive ? "exhaustive" : "sampled";
    j["system_file"] = path.filename().string();
    std::cout << j.dump(2) << '\n';
    if (!rep.ok || !b.system.is_partial()) return kExitVerifyFailed;
    return b.target_met ? kExitOk : kExitTargetMissed;
}

// ---------------------------------------------------------------------------

struct CountOpts {
    int n = 0;
    int k = 4;
    std::string catalog;
};

int cmd_count(const CountOpts& o) {
    if (o.n < 1) throw ConfigError("--n must be positive");
    if (o.k < 2) throw ConfigError("--k must be at least 2");
    const auto cat = load_catalog(o.catalog, o.k + 2);
    const auto lc = conjectured_log_count(o.n, o.k, cat.get());
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", lc.constant);
    std::cout << "constant=" << buf << '\n';
    std::snprintf(buf, sizeof buf, "%.12g", lc.log_count);
    std::cout << "log_count=" << buf << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse Steiner triple systems: removal process, verification, trajectories and designs"};
    app.require_subcommand(1);
    const std::string out_default = default_out_dir();

    CatalogOpts co;
    co.out_dir = out_default;
    auto* c_cat = app.add_subcommand("catalog", "enumerate the Erdős configuration catalog");
    c_cat->add_option("--jmax", co.jmax, "largest configuration size (4..10)");
    c_cat->add_option("--out", co.out, "catalog file");
    c_cat->add_option("--out-dir", co.out_dir, "output directory (default $STS_OUT_DIR or .)");

    RunOpts ro;
    ro.out_dir = out_default;
    auto* c_run = app.add_subcommand("run", "one full process run with trajectory tracking");
    c_run->add_option("--n", ro.n, "vertex count")->required();
    c_run->add_option("--k", ro.k, "sparseness level");
    c_run->add_option("--gamma", ro.gamma, "target: (1-gamma) n^2/6 chosen triples");
    c_run->add_option("--seed", ro.seed, "random seed");
    c_run->add_option("--track-gamma", ro.constants.gamma, "cutoff gamma for tracking (tau_cut)");
    c_run->add_option("--C", ro.constants.C, "error growth constant");
    c_run->add_option("--eps0", ro.constants.eps0, "initial relative error");
    c_run->add_option("--edges", ro.edges, "tracked uncovered pairs");
    c_run->add_option("--triples", ro.triples, "tracked available triples");
    c_run->add_option("--checkpoints", ro.checkpoints, "checkpoint fractions of tau_cut, comma separated");
    c_run->add_flag("--no-track", ro.no_track, "skip trajectory tracking");
    c_run->add_option("--max-seconds", ro.max_seconds, "wall-clock budget");
    c_run->add_option("--catalog", ro.catalog, "catalog file (default: enumerate)");
    c_run->add_option("--out-dir", ro.out_dir, "output directory (default $STS_OUT_DIR or .)");

    TrialsOpts to;
    to.out_dir = out_default;
    auto* c_trials = app.add_subcommand("trials", "independent runs with derived seeds");
    c_trials->add_option("--n", to.n, "vertex count")->required();
    c_trials->add_option("--k", to.k, "sparseness level");
    c_trials->add_option("--trials", to.trials, "number of runs");
    c_trials->add_option("--master-seed", to.master_seed, "master seed");
    c_trials->add_option("--gamma", to.gamma, "target gamma");
    c_trials->add_option("--jobs", to.jobs, "worker threads");
    c_trials->add_option("--samples", to.samples, "sampled sparseness checks per output (n > 14)");
    c_trials->add_option("--catalog", to.catalog, "catalog file");
    c_trials->add_option("--out", to.out, "aggregate JSON file");
    c_trials->add_option("--out-dir", to.out_dir, "output directory (default $STS_OUT_DIR or .)");

    VerifyOpts vo;
    auto* c_verify = app.add_subcommand("verify", "check a system file for sparseness");
    c_verify->add_option("file", vo.file, "sts or qsys file")->required();
    c_verify->add_option("--k", vo.k, "sparseness level");
    c_verify->add_option("--budget", vo.budget, "exhaustive subset budget before falling back to sampling");
    c_verify->add_option("--samples", vo.samples, "samples for the fallback");
    c_verify->add_option("--seed", vo.seed, "seed for the fallback");

    TrajectoryOpts jo;
    jo.out_dir = out_default;
    auto* c_traj = app.add_subcommand("trajectory", "evaluate the trajectory functions on a grid");
    c_traj->add_option("--n", jo.n, "vertex count")->required();
    c_traj->add_option("--k", jo.k, "sparseness level");
    c_traj->add_option("--grid", jo.grid, "grid points t tau_cut/(grid+1), t = 1..grid");
    c_traj->add_option("--track-gamma", jo.constants.gamma, "cutoff gamma");
    c_traj->add_option("--C", jo.constants.C, "error growth constant");
    c_traj->add_option("--eps0", jo.constants.eps0, "initial relative error");
    c_traj->add_option("--catalog", jo.catalog, "catalog file");
    c_traj->add_option("--out", jo.out, "CSV file");
    c_traj->add_option("--out-dir", jo.out_dir, "output directory (default $STS_OUT_DIR or .)");

    DesignOpts dopt;
    dopt.out_dir = out_default;
    auto* c_design = app.add_subcommand("design", "weakly k-sparse partial (n,q,r)-Steiner system");
    c_design->add_option("--n", dopt.n, "vertex count");
    c_design->add_option("--q", dopt.q, "block size");
    c_design->add_option("--r", dopt.r, "covered subset size");
    c_design->add_option("--k", dopt.k, "sparseness level");
    c_design->add_option("--gamma", dopt.gamma, "target: (1-gamma) C(n,r)/C(q,r) blocks");
    c_design->add_option("--theta", dopt.theta, "density exponent");
    c_design->add_option("--seed", dopt.seed, "random seed");
    c_design->add_option("--passes", dopt.passes, "greedy matching restarts");
    c_design->add_option("--budget", dopt.budget, "resampling rounds");
    c_design->add_option("--eps-degree", dopt.eps_degree, "degree slack for the recorded degree check");
    c_design->add_option("--mode", dopt.mode, "resampling: local or full");
    c_design->add_option("--out", dopt.out, "qsys file");
    c_design->add_option("--out-dir", dopt.out_dir, "output directory (default $STS_OUT_DIR or .)");

    CountOpts cto;
    auto* c_count = app.add_subcommand("count", "conjectured log-count of k-sparse systems");
    c_count->add_option("--n", cto.n, "vertex count")->required();
    c_count->add_option("--k", cto.k, "sparseness level");
    c_count->add_option("--catalog", cto.catalog, "catalog file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }
    try {
        if (c_cat->parsed()) return cmd_catalog(co);
        if (c_run->parsed()) return cmd_run(ro);
        if (c_trials->parsed()) return cmd_trials(to);
        if (c_verify->parsed()) return cmd_verify(vo);
        if (c_traj->parsed()) return cmd_trajectory(jo);
        if (c_design->parsed()) return cmd_design(dopt);
        if (c_count->parsed()) return cmd_count(cto);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const InvalidArgument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return kExitConfig;
}
