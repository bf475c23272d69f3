#include "sbm/instance_io.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>

namespace sbm {

namespace {

// Token stream over comment-stripped lines, tracking line numbers for
// error messages.
class Tokens {
public:
    Tokens(std::istream& in, std::string origin) : in_(in), origin_(std::move(origin)) {}

    bool next(std::string& tok) {
        while (queue_pos_ >= queue_.size()) {
            std::string line;
            if (!std::getline(in_, line)) return false;
            ++line_no_;
            if (auto hash = line.find('#'); hash != std::string::npos)
                line.erase(hash);
            queue_.clear();
            queue_pos_ = 0;
            std::istringstream ls(line);
            std::string t;
            while (ls >> t) queue_.push_back(t);
        }
        tok = queue_[queue_pos_++];
        return true;
    }

    std::string require(const char* what) {
        std::string tok;
        if (!next(tok))
            throw ParseError(fmt::format("{}:{}: expected {}, got end of file",
                                         origin_, line_no_, what));
        return tok;
    }

    void expect_keyword(const char* kw) {
        std::string tok = require(kw);
        if (tok != kw)
            throw ParseError(fmt::format("{}:{}: expected \"{}\", got \"{}\"",
                                         origin_, line_no_, kw, tok));
    }

    long long require_int(const char* what) {
        std::string tok = require(what);
        errno = 0;
        char* end = nullptr;
        long long v = std::strtoll(tok.c_str(), &end, 10);
        if (errno != 0 || end == tok.c_str() || *end != '\0')
            throw ParseError(fmt::format("{}:{}: expected {} (integer), got \"{}\"",
                                         origin_, line_no_, what, tok));
        return v;
    }

    double require_double(const char* what) {
        std::string tok = require(what);
        if (tok == "inf") return std::numeric_limits<double>::infinity();
        errno = 0;
        char* end = nullptr;
        double v = std::strtod(tok.c_str(), &end);
        if (errno != 0 || end == tok.c_str() || *end != '\0' || std::isnan(v))
            throw ParseError(fmt::format("{}:{}: expected {} (number), got \"{}\"",
                                         origin_, line_no_, what, tok));
        return v;
    }

    bool at_end() {
        std::string tok;
        if (!next(tok)) return true;
        pushback(tok);
        return false;
    }

    int line_no() const { return line_no_; }
    const std::string& origin() const { return origin_; }

private:
    void pushback(const std::string&) { --queue_pos_; }

    std::istream& in_;
    std::string origin_;
    std::vector<std::string> queue_;
    size_t queue_pos_ = 0;
    int line_no_ = 0;
};

} // namespace

std::string fmt_num(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == std::floor(v) && std::fabs(v) < 1e15)
        return fmt::format("{:.0f}", v);
    return fmt::format("{}", v);
}

Instance load_instance(std::istream& in, const std::string& origin) {
    Tokens tk(in, origin);
    auto fail = [&](const std::string& msg) -> ParseError {
        return ParseError(fmt::format("{}:{}: {}", tk.origin(), tk.line_no(), msg));
    };

    Instance inst;
    long long n = tk.require_int("node count");
    long long nl = tk.require_int("label count");
    long long ns = tk.require_int("scenario count");
    if (n < 1 || n > 100'000'000) throw fail("node count out of range");
    if (nl < 1 || nl > 10'000'000) throw fail("label count out of range");
    if (ns < 1 || ns > 10'000'000) throw fail("scenario count out of range");
    inst.graph.node_count = int(n);
    inst.graph.label_count = int(nl);
    inst.budget = tk.require_double("budget");

    tk.expect_keyword("costs");
    inst.costs.resize(nl);
    for (long long k = 0; k < nl; ++k)
        inst.costs[k] = tk.require_double("label cost");

    tk.expect_keyword("seeds");
    // seed list runs until the "arcs" keyword
    for (;;) {
        std::string tok = tk.require("seed or \"arcs\"");
        if (tok == "arcs") break;
        errno = 0;
        char* end = nullptr;
        long long s = std::strtoll(tok.c_str(), &end, 10);
        if (errno != 0 || end == tok.c_str() || *end != '\0')
            throw fail(fmt::format("expected seed (integer), got \"{}\"", tok));
        inst.seeds.push_back(int(s));
    }

    long long m = tk.require_int("arc count");
    if (m < 0 || m > 500'000'000) throw fail("arc count out of range");
    inst.graph.arcs.resize(m);
    for (long long i = 0; i < m; ++i) {
        inst.graph.arcs[i].tail = int(tk.require_int("arc tail"));
        inst.graph.arcs[i].head = int(tk.require_int("arc head"));
        inst.graph.arcs[i].label = int(tk.require_int("arc label"));
    }

    inst.scenarios.live.resize(ns);
    for (long long w = 0; w < ns; ++w) {
        tk.expect_keyword("scenario");
        long long idx = tk.require_int("scenario index");
        if (idx != w)
            throw fail(fmt::format("expected scenario {}, got {}", w, idx));
        long long t = tk.require_int("live arc count");
        if (t < 0 || t > m) throw fail("live arc count out of range");
        auto& ids = inst.scenarios.live[w];
        ids.resize(t);
        for (long long i = 0; i < t; ++i)
            ids[i] = int(tk.require_int("live arc id"));
    }
    if (!tk.at_end()) throw fail("trailing content after last scenario");

    inst.scenarios.normalize();
    try {
        inst.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(fmt::format("{}: invalid instance: {}", origin, e.what()));
    }
    return inst;
}

Instance load_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(fmt::format("{}: cannot open file", path));
    return load_instance(in, path);
}

void save_instance(std::ostream& out, const Instance& inst) {
    out << inst.graph.node_count << ' ' << inst.graph.label_count << ' '
        << inst.scenarios.count() << ' ' << fmt_num(inst.budget) << '\n';
    out << "costs";
    for (double c : inst.costs) out << ' ' << fmt_num(c);
    out << '\n';
    out << "seeds";
    for (int s : inst.seeds) out << ' ' << s;
    out << '\n';
    out << "arcs " << inst.graph.arcs.size() << '\n';
    for (const Arc& a : inst.graph.arcs)
        out << a.tail << ' ' << a.head << ' ' << a.label << '\n';
    for (int w = 0; w < inst.scenarios.count(); ++w) {
        const auto& ids = inst.scenarios.live[w];
        out << "scenario " << w << ' ' << ids.size() << '\n';
        for (size_t i = 0; i < ids.size(); ++i)
            out << ids[i] << " \n"[i + 1 == ids.size()];
    }
}

std::string instance_to_string(const Instance& inst) {
    std::ostringstream os;
    save_instance(os, inst);
    return os.str();
}

void save_instance_file(const std::string& path, const Instance& inst) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(fmt::format("{}: cannot open for writing", path));
    save_instance(out, inst);
    if (!out) throw std::runtime_error(fmt::format("{}: write failed", path));
}

SnapEdges load_snap_edges(const std::string& path, bool undirected) {
    std::ifstream in(path);
    if (!in) throw ParseError(fmt::format("{}: cannot open file", path));

    SnapEdges out;
    std::unordered_map<long long, int> remap;
    std::unordered_set<uint64_t> seen;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        long long u, v;
        if (!(ls >> u)) continue;   // blank or comment-only line
        if (!(ls >> v))
            throw ParseError(fmt::format("{}:{}: expected two node ids", path, line_no));
        long long extra;
        if (ls >> extra)
            throw ParseError(fmt::format("{}:{}: expected two node ids, got more", path, line_no));
        if (u == v) {
            ++out.self_loops_dropped;
            continue;
        }
        auto id = [&](long long raw) {
            auto [it, inserted] = remap.try_emplace(raw, out.node_count);
            if (inserted) ++out.node_count;
            return it->second;
        };
        int a = id(u), b = id(v);
        uint64_t lo = uint64_t(std::min(a, b)), hi = uint64_t(std::max(a, b));
        uint64_t key = undirected ? (lo << 32 | hi) : (uint64_t(a) << 32 | uint64_t(b));
        if (!seen.insert(key).second) {
            ++out.duplicates_dropped;
            continue;
        }
        out.edges.emplace_back(a, b);
    }
    return out;
}

} // namespace sbm
