#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hgsts {

using Vertex = std::int32_t;

/// Raised when a caller violates an operation's documented preconditions.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Exact binomial coefficient for small arguments; returns 0 when k < 0 or k > n.
constexpr std::uint64_t binom(std::int64_t n, std::int64_t k) {
    if (k < 0 || n < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t r = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    }
    return r;
}

/// Binomial coefficient as a double. Exact product below 10^4, log-gamma above.
inline double binom_real(double n, double k) {
    if (k < 0 || k > n) return 0.0;
    if (n <= 1e4) {
        double r = 1.0;
        for (int i = 1; i <= static_cast<int>(k); ++i) r = r * (n - k + i) / i;
        return r;
    }
    return std::exp(std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1));
}

inline double factorial_real(int m) {
    double r = 1.0;
    for (int i = 2; i <= m; ++i) r *= i;
    return r;
}

/// An unordered pair of distinct vertices, stored with a < b.
struct Pair {
    Vertex a = 0;
    Vertex b = 0;

    constexpr Pair() = default;
    constexpr Pair(Vertex x, Vertex y) : a(std::min(x, y)), b(std::max(x, y)) {}

    friend constexpr auto operator<=>(const Pair&, const Pair&) = default;
};

/// An unordered 3-set of vertices, stored in strictly increasing order.
struct Triple {
    Vertex a = 0;
    Vertex b = 0;
    Vertex c = 0;

    constexpr Triple() = default;
    constexpr Triple(Vertex x, Vertex y, Vertex z) {
        if (x > y) std::swap(x, y);
        if (y > z) std::swap(y, z);
        if (x > y) std::swap(x, y);
        a = x;
        b = y;
        c = z;
    }

    [[nodiscard]] constexpr bool valid() const { return 0 <= a && a < b && b < c; }
    [[nodiscard]] constexpr bool contains(Vertex v) const { return v == a || v == b || v == c; }
    [[nodiscard]] constexpr bool contains(Pair e) const { return contains(e.a) && contains(e.b); }
    [[nodiscard]] constexpr std::array<Vertex, 3> vertices() const { return {a, b, c}; }
    [[nodiscard]] constexpr std::array<Pair, 3> pairs() const {
        return {Pair{a, b}, Pair{a, c}, Pair{b, c}};
    }
    /// The vertex of this triple outside `e`; requires e ⊂ *this.
    [[nodiscard]] constexpr Vertex third(Pair e) const {
        if (a != e.a && a != e.b) return a;
        if (b != e.a && b != e.b) return b;
        return c;
    }

    friend constexpr auto operator<=>(const Triple&, const Triple&) = default;
};

[[nodiscard]] constexpr int intersection_size(const Triple& x, const Triple& y) {
    return int(y.contains(x.a)) + int(y.contains(x.b)) + int(y.contains(x.c));
}

/// Colexicographic rank of a triple among all triples of non-negative integers.
[[nodiscard]] constexpr std::uint32_t triple_rank(const Triple& t) {
    const auto c = static_cast<std::uint64_t>(t.c);
    const auto b = static_cast<std::uint64_t>(t.b);
    return static_cast<std::uint32_t>(c * (c - 1) * (c - 2) / 6 + b * (b - 1) / 2 +
                                      static_cast<std::uint64_t>(t.a));
}

[[nodiscard]] inline Triple triple_unrank(std::uint32_t rank) {
    auto r = static_cast<std::uint64_t>(rank);
    auto c = static_cast<std::uint64_t>(std::cbrt(6.0 * static_cast<double>(r))) + 2;
    while (c * (c - 1) * (c - 2) / 6 > r) --c;
    while ((c + 1) * c * (c - 1) / 6 <= r) ++c;
    r -= c * (c - 1) * (c - 2) / 6;
    auto b = static_cast<std::uint64_t>(std::sqrt(2.0 * static_cast<double>(r))) + 1;
    while (b * (b - 1) / 2 > r) --b;
    while ((b + 1) * b / 2 <= r) ++b;
    r -= b * (b - 1) / 2;
    Triple t;
    t.a = static_cast<Vertex>(r);
    t.b = static_cast<Vertex>(b);
    t.c = static_cast<Vertex>(c);
    return t;
}

[[nodiscard]] constexpr std::size_t pair_index(Pair e, int n) {
    return static_cast<std::size_t>(e.a) * static_cast<std::size_t>(n) + static_cast<std::size_t>(e.b);
}

/// A 3-graph on the vertex set {0,...,n-1}. Blocks are kept sorted and unique.
class TripleSystem {
public:
    TripleSystem() = default;
    explicit TripleSystem(int n) : n_(n) {
        if (n < 0) throw InvalidArgument("vertex count must be non-negative");
    }
    TripleSystem(int n, std::vector<Triple> blocks) : n_(n), blocks_(std::move(blocks)) {
        if (n < 0) throw InvalidArgument("vertex count must be non-negative");
        normalize();
    }

    [[nodiscard]] int n() const { return n_; }
    [[nodiscard]] const std::vector<Triple>& blocks() const { return blocks_; }
    [[nodiscard]] std::size_t size() const { return blocks_.size(); }
    [[nodiscard]] bool empty() const { return blocks_.empty(); }

    [[nodiscard]] bool contains(const Triple& t) const {
        return std::binary_search(blocks_.begin(), blocks_.end(), t);
    }

    /// Adds a block; returns false if it was already present.
    bool insert(const Triple& t) {
        check_block(t);
        auto it = std::lower_bound(blocks_.begin(), blocks_.end(), t);
        if (it != blocks_.end() && *it == t) return false;
        blocks_.insert(it, t);
        return true;
    }

    bool erase(const Triple& t) {
        auto it = std::lower_bound(blocks_.begin(), blocks_.end(), t);
        if (it == blocks_.end() || *it != t) return false;
        blocks_.erase(it);
        return true;
    }

    /// Sorted list of non-isolated vertices.
    [[nodiscard]] std::vector<Vertex> points() const {
        std::vector<char> seen(static_cast<std::size_t>(n_), 0);
        for (const auto& t : blocks_) {
            seen[t.a] = seen[t.b] = seen[t.c] = 1;
        }
        std::vector<Vertex> out;
        for (Vertex v = 0; v < n_; ++v) {
            if (seen[v]) out.push_back(v);
        }
        return out;
    }

    [[nodiscard]] std::vector<int> degrees() const {
        std::vector<int> deg(static_cast<std::size_t>(n_), 0);
        for (const auto& t : blocks_) {
            ++deg[t.a];
            ++deg[t.b];
            ++deg[t.c];
        }
        return deg;
    }

    /// Blocks lying entirely inside the given vertex set.
    [[nodiscard]] std::vector<Triple> induced(std::span<const Vertex> w) const {
        std::vector<char> in(static_cast<std::size_t>(n_), 0);
        for (auto v : w) in[v] = 1;
        std::vector<Triple> out;
        for (const auto& t : blocks_) {
            if (in[t.a] && in[t.b] && in[t.c]) out.push_back(t);
        }
        return out;
    }

    /// Applies a vertex relabeling `perm` (old -> new) into a system on `new_n` vertices.
    [[nodiscard]] TripleSystem relabeled(std::span<const Vertex> perm, int new_n) const {
        std::vector<Triple> out;
        out.reserve(blocks_.size());
        for (const auto& t : blocks_) out.emplace_back(perm[t.a], perm[t.b], perm[t.c]);
        return {new_n, std::move(out)};
    }

    /// Copy with only the non-isolated points, relabeled 0..j-1 in increasing order.
    [[nodiscard]] TripleSystem compacted() const {
        auto pts = points();
        std::vector<Vertex> perm(static_cast<std::size_t>(n_), -1);
        for (std::size_t i = 0; i < pts.size(); ++i) perm[pts[i]] = static_cast<Vertex>(i);
        return relabeled(perm, static_cast<int>(pts.size()));
    }

    friend bool operator==(const TripleSystem&, const TripleSystem&) = default;

private:
    void check_block(const Triple& t) const {
        if (!t.valid() || t.c >= n_) {
            throw InvalidArgument("block " + std::to_string(t.a) + "," + std::to_string(t.b) + "," +
                                  std::to_string(t.c) + " outside vertex range " + std::to_string(n_));
        }
    }
    void normalize() {
        for (const auto& t : blocks_) check_block(t);
        std::sort(blocks_.begin(), blocks_.end());
        blocks_.erase(std::unique(blocks_.begin(), blocks_.end()), blocks_.end());
    }

    int n_ = 0;
    std::vector<Triple> blocks_;
};

/// Parses "012,013" style shorthand (single-digit labels) into a system on `n` points.
inline TripleSystem from_digits(int n, const std::string& spec) {
    std::vector<Triple> blocks;
    std::string cur;
    auto flush = [&] {
        if (cur.empty()) return;
        if (cur.size() != 3) throw InvalidArgument("bad block shorthand: " + cur);
        blocks.emplace_back(cur[0] - '0', cur[1] - '0', cur[2] - '0');
        cur.clear();
    };
    for (char ch : spec) {
        if (ch >= '0' && ch <= '9') {
            cur.push_back(ch);
        } else {
            flush();
        }
    }
    flush();
    return {n, std::move(blocks)};
}

}  // namespace hgsts

template <>
struct std::hash<hgsts::Triple> {
    std::size_t operator()(const hgsts::Triple& t) const noexcept {
        return std::hash<std::uint32_t>{}(hgsts::triple_rank(t));
    }
};
