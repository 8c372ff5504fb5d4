#pragma once

// Canonical labeling of small 3-graphs by colour refinement plus exhaustive
// individualization. The canonical form is the lexicographically least sorted
// block list over all leaves of the search tree; since refinement and the
// branching cell are chosen invariantly, the form depends only on the
// isomorphism class.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hgsts/triple.hpp"

namespace hgsts {

/// Thrown when exhaustive canonicalization is refused (too many points).
class CanonicalizationLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CanonicalForm {
    TripleSystem form;
    /// relabel[v] = canonical label of original vertex v.
    std::vector<Vertex> relabel;
    /// Number of automorphisms of the input (vertex permutations fixing the block set).
    std::uint64_t automorphisms = 0;
};

namespace detail {

class Canonicalizer {
public:
    Canonicalizer(int n, const std::vector<Triple>& blocks, std::vector<int> block_colour,
                  bool keep_automorphisms)
        : n_(n), blocks_(blocks), block_colour_(std::move(block_colour)),
          keep_auts_(keep_automorphisms), incident_(static_cast<std::size_t>(n)) {
        for (std::size_t i = 0; i < blocks_.size(); ++i) {
            for (auto v : blocks_[i].vertices()) incident_[v].push_back(static_cast<int>(i));
        }
    }

    void run() {
        std::vector<int> colour(static_cast<std::size_t>(n_), 0);
        refine(colour);
        search(colour);
    }

    [[nodiscard]] const std::vector<std::pair<int, Triple>>& best_form() const { return best_; }
    [[nodiscard]] const std::vector<Vertex>& best_labeling() const { return best_label_; }
    [[nodiscard]] std::uint64_t automorphism_count() const { return best_count_; }
    [[nodiscard]] const std::vector<std::vector<Vertex>>& min_leaves() const { return leaves_; }

private:
    // Iterated refinement. Colours are ranks of (old colour, sorted incidence signature),
    // so the ordered partition only ever splits in place.
    void refine(std::vector<int>& colour) const {
        int classes = count_classes(colour);
        while (true) {
            using Sig = std::pair<int, std::vector<std::array<int, 3>>>;
            std::vector<Sig> sig(static_cast<std::size_t>(n_));
            for (Vertex v = 0; v < n_; ++v) {
                auto& s = sig[v];
                s.first = colour[v];
                for (int bi : incident_[v]) {
                    const auto& t = blocks_[bi];
                    std::array<int, 2> other{};
                    int k = 0;
                    for (auto u : t.vertices()) {
                        if (u != v) other[k++] = colour[u];
                    }
                    if (other[0] > other[1]) std::swap(other[0], other[1]);
                    s.second.push_back({block_colour_.empty() ? 0 : block_colour_[bi], other[0], other[1]});
                }
                std::sort(s.second.begin(), s.second.end());
            }
            std::vector<Sig> distinct(sig);
            std::sort(distinct.begin(), distinct.end());
            distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
            for (Vertex v = 0; v < n_; ++v) {
                colour[v] = static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(), sig[v]) -
                                             distinct.begin());
            }
            const int now = static_cast<int>(distinct.size());
            if (now == classes) return;
            classes = now;
        }
    }

    static int count_classes(const std::vector<int>& colour) {
        std::vector<int> c(colour);
        std::sort(c.begin(), c.end());
        return static_cast<int>(std::unique(c.begin(), c.end()) - c.begin());
    }

    void search(const std::vector<int>& colour) {
        // Cell sizes by colour.
        std::map<int, std::vector<Vertex>> cells;
        for (Vertex v = 0; v < n_; ++v) cells[colour[v]].push_back(v);
        const std::vector<Vertex>* target = nullptr;
        for (const auto& [c, members] : cells) {
            if (members.size() < 2) continue;
            // Isolated vertices are interchangeable; never branch on them.
            if (incident_[members.front()].empty()) continue;
            if (target == nullptr || members.size() < target->size()) target = &members;
        }
        if (target == nullptr) {
            leaf(colour);
            return;
        }
        const std::vector<Vertex> branch = *target;
        for (Vertex v : branch) {
            std::vector<int> next(colour.size());
            // Individualize v: it gets a colour just below its cell.
            for (Vertex u = 0; u < n_; ++u) next[u] = 2 * colour[u] + 1;
            next[v] = 2 * colour[v];
            refine(next);
            search(next);
        }
    }

    void leaf(const std::vector<int>& colour) {
        // Labels follow colour order; ties only among isolated vertices, broken by index.
        std::vector<Vertex> order(static_cast<std::size_t>(n_));
        for (Vertex v = 0; v < n_; ++v) order[v] = v;
        std::stable_sort(order.begin(), order.end(),
                         [&](Vertex x, Vertex y) { return colour[x] < colour[y]; });
        std::vector<Vertex> label(static_cast<std::size_t>(n_));
        for (int i = 0; i < n_; ++i) label[order[i]] = i;
        std::vector<std::pair<int, Triple>> form;
        form.reserve(blocks_.size());
        for (std::size_t i = 0; i < blocks_.size(); ++i) {
            const auto& t = blocks_[i];
            form.emplace_back(block_colour_.empty() ? 0 : block_colour_[i],
                              Triple{label[t.a], label[t.b], label[t.c]});
        }
        std::sort(form.begin(), form.end());
        if (!have_best_ || form < best_) {
            best_ = std::move(form);
            best_label_ = label;
            best_count_ = 1;
            have_best_ = true;
            leaves_.clear();
            if (keep_auts_) leaves_.push_back(label);
        } else if (form == best_) {
            ++best_count_;
            if (keep_auts_) leaves_.push_back(label);
        }
    }

    int n_;
    const std::vector<Triple>& blocks_;
    std::vector<int> block_colour_;
    bool keep_auts_;
    std::vector<std::vector<int>> incident_;
    bool have_best_ = false;
    std::vector<std::pair<int, Triple>> best_;
    std::vector<Vertex> best_label_;
    std::uint64_t best_count_ = 0;
    std::vector<std::vector<Vertex>> leaves_;
};

}  // namespace detail

inline constexpr int kMaxCanonicalPoints = 12;

/// Canonical representative of S under vertex relabeling; isolated vertices take the top labels.
inline CanonicalForm canonical_form(const TripleSystem& s, int max_points = kMaxCanonicalPoints) {
    if (static_cast<int>(s.points().size()) > max_points) {
        throw CanonicalizationLimit("canonical_form: " + std::to_string(s.points().size()) +
                                    " points exceeds the exhaustive limit of " + std::to_string(max_points));
    }
    detail::Canonicalizer c(s.n(), s.blocks(), {}, false);
    c.run();
    std::vector<Triple> blocks;
    for (const auto& [col, t] : c.best_form()) blocks.push_back(t);
    return {TripleSystem{s.n(), std::move(blocks)}, c.best_labeling(), c.automorphism_count()};
}

/// All automorphisms of S as vertex permutations (perm[v] = image of v).
inline std::vector<std::vector<Vertex>> automorphisms(const TripleSystem& s) {
    detail::Canonicalizer c(s.n(), s.blocks(), {}, true);
    c.run();
    const auto& leaves = c.min_leaves();
    std::vector<std::vector<Vertex>> out;
    const auto& base = leaves.front();
    std::vector<Vertex> base_inv(base.size());
    for (std::size_t v = 0; v < base.size(); ++v) base_inv[base[v]] = static_cast<Vertex>(v);
    for (const auto& lab : leaves) {
        // base(sigma(v)) = lab(v)  =>  sigma = base^{-1} o lab
        std::vector<Vertex> sigma(lab.size());
        for (std::size_t v = 0; v < lab.size(); ++v) sigma[v] = base_inv[lab[v]];
        out.push_back(std::move(sigma));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Canonical key of a block-coloured 3-graph (used to deduplicate glued pairs).
inline std::vector<std::pair<int, Triple>> coloured_canonical_key(int n, const std::vector<Triple>& blocks,
                                                                  std::vector<int> colours) {
    detail::Canonicalizer c(n, blocks, std::move(colours), false);
    c.run();
    return c.best_form();
}

}  // namespace hgsts
