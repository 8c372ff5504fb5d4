#pragma once

// Text formats: triple systems ("sts v1"), general q-systems ("qsys"), and the trailing
// schema line every emitted file ends with.

#include <sstream>
#include <string>
#include <vector>

#include "hgsts/configs.hpp"
#include "hgsts/general_designs.hpp"
#include "hgsts/schema.hpp"
#include "hgsts/triple.hpp"

namespace hgsts {

namespace detail {

inline std::string trim_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

inline int parse_key_int(const std::string& tok, const std::string& key, const std::string& what) {
    if (tok.rfind(key + "=", 0) != 0) throw InvalidArgument(what + ": expected " + key + "=<int>, got " + tok);
    try {
        std::size_t used = 0;
        const int v = std::stoi(tok.substr(key.size() + 1), &used);
        if (used != tok.size() - key.size() - 1) throw InvalidArgument("");
        return v;
    } catch (const std::exception&) {
        throw InvalidArgument(what + ": bad integer in " + tok);
    }
}

}  // namespace detail

inline std::string write_sts(const TripleSystem& s) {
    std::ostringstream os;
    os << "sts v1 n=" << s.n() << "\n";
    for (const auto& t : s.blocks()) os << t.a << ' ' << t.b << ' ' << t.c << "\n";
    os << schema_line("sts");
    return os.str();
}

inline TripleSystem read_sts(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) throw InvalidArgument("sts: empty input");
    line = detail::trim_cr(line);
    std::istringstream hs(line);
    std::string magic;
    std::string version;
    std::string ntok;
    std::string extra;
    hs >> magic >> version >> ntok;
    if (magic != "sts") throw InvalidArgument("sts: bad header: " + line);
    if (version != "v1") throw InvalidArgument("sts: unsupported version " + version);
    if (hs >> extra) throw InvalidArgument("sts: trailing header tokens: " + line);
    const int n = detail::parse_key_int(ntok, "n", "sts");
    if (n < 0) throw InvalidArgument("sts: n must be non-negative");
    TripleSystem s(n);
    bool trailer = false;
    while (std::getline(is, line)) {
        line = detail::trim_cr(line);
        if (line.empty()) continue;
        if (trailer) throw InvalidArgument("sts: content after schema line");
        if (detail::consume_schema_line(line, "sts")) {
            trailer = true;
            continue;
        }
        std::istringstream ls(line);
        long a = 0;
        long b = 0;
        long c = 0;
        if (!(ls >> a >> b >> c) || (ls >> extra)) throw InvalidArgument("sts: bad block line: " + line);
        if (a < 0 || b < 0 || c < 0 || a >= n || b >= n || c >= n) throw InvalidArgument("sts: vertex out of range: " + line);
        if (a == b || b == c || a == c) throw InvalidArgument("sts: repeated vertex: " + line);
        if (!s.insert(Triple(static_cast<Vertex>(a), static_cast<Vertex>(b), static_cast<Vertex>(c)))) {
            throw InvalidArgument("sts: duplicate block: " + line);
        }
    }
    if (!trailer) throw InvalidArgument("sts: missing schema line");
    return s;
}

inline std::string write_qsys(const QSystem& s) {
    s.validate();
    QSystem sorted = s;
    sorted.normalize();
    std::ostringstream os;
    os << "qsys n=" << s.n << " q=" << s.q << " r=" << s.r << "\n";
    for (const auto& b : sorted.blocks) {
        for (std::size_t x = 0; x < b.size(); ++x) os << (x ? "," : "") << b[x];
        os << "\n";
    }
    os << schema_line("qsys");
    return os.str();
}

inline QSystem read_qsys(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) throw InvalidArgument("qsys: empty input");
    line = detail::trim_cr(line);
    std::istringstream hs(line);
    std::string magic;
    std::string tn;
    std::string tq;
    std::string tr;
    std::string extra;
    hs >> magic >> tn >> tq >> tr;
    if (magic != "qsys" || (hs >> extra)) throw InvalidArgument("qsys: bad header: " + line);
    QSystem s;
    s.n = detail::parse_key_int(tn, "n", "qsys");
    s.q = detail::parse_key_int(tq, "q", "qsys");
    s.r = detail::parse_key_int(tr, "r", "qsys");
    bool trailer = false;
    while (std::getline(is, line)) {
        line = detail::trim_cr(line);
        if (line.empty()) continue;
        if (trailer) throw InvalidArgument("qsys: content after schema line");
        if (detail::consume_schema_line(line, "qsys")) {
            trailer = true;
            continue;
        }
        Block b;
        std::istringstream ls(line);
        std::string part;
        while (std::getline(ls, part, ',')) {
            try {
                std::size_t used = 0;
                const int v = std::stoi(part, &used);
                if (used != part.size()) throw InvalidArgument("");
                b.push_back(v);
            } catch (const std::exception&) {
                throw InvalidArgument("qsys: bad block line: " + line);
            }
        }
        s.blocks.push_back(std::move(b));
    }
    if (!trailer) throw InvalidArgument("qsys: missing schema line");
    s.validate();
    const auto before = s.blocks.size();
    s.normalize();
    if (s.blocks.size() != before) throw InvalidArgument("qsys: duplicate block");
    return s;
}

inline std::string write_catalog(const ErdosCatalog& c) { return c.serialize() + schema_line("erdos-catalog"); }

inline ErdosCatalog read_catalog(const std::string& text) {
    std::istringstream is(text);
    std::string body;
    std::string line;
    bool trailer = false;
    while (std::getline(is, line)) {
        line = detail::trim_cr(line);
        if (trailer && !line.empty()) throw InvalidArgument("catalog: content after schema line");
        if (detail::consume_schema_line(line, "erdos-catalog")) {
            trailer = true;
            continue;
        }
        body += line + "\n";
    }
    if (!trailer) throw InvalidArgument("catalog: missing schema line");
    return ErdosCatalog::parse(body);
}

}  // namespace hgsts
