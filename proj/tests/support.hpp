#ifndef SNP_TESTS_SUPPORT_HPP
#define SNP_TESTS_SUPPORT_HPP

// Shared fixtures: corpus loading, random generators and oracles that share
// no code with the library paths they check.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "snp/snp.hpp"

namespace snp_test {

using snp::IntMatrix;
using snp::IntVector;
using snp::RegexAst;
using snp::Rule;
using snp::SnpSystem;

inline std::string corpus_path(const std::string& name) { return std::string(SNP_CORPUS_DIR) + "/" + name; }

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline SnpSystem example1() { return snp::parse_system(read_file(corpus_path("example1.snp"))); }
inline SnpSystem example3() { return snp::parse_system(read_file(corpus_path("example3.snp"))); }

// ---------------------------------------------------------------------------
// Regex

/// Random AST built through the smart constructors, no empty literals.
inline RegexAst random_regex(std::mt19937_64& rng, int depth) {
    std::uniform_int_distribution<int> kind(0, depth <= 0 ? 0 : 3);
    std::uniform_int_distribution<std::uint32_t> lit(1, 4);
    std::uniform_int_distribution<int> arity(2, 3);
    switch (kind(rng)) {
    case 0:
        return RegexAst::literal(lit(rng));
    case 1: {
        std::vector<RegexAst> parts;
        for (int i = arity(rng); i > 0; --i)
            parts.push_back(random_regex(rng, depth - 1));
        return RegexAst::concat(std::move(parts));
    }
    case 2: {
        std::vector<RegexAst> parts;
        for (int i = arity(rng); i > 0; --i)
            parts.push_back(random_regex(rng, depth - 1));
        return RegexAst::alternation(std::move(parts));
    }
    default:
        return RegexAst::star(random_regex(rng, depth - 1));
    }
}

/// Language of the AST restricted to lengths 0..limit, computed by dynamic
/// programming on the tree (no automaton).
inline std::vector<bool> language_upto(const RegexAst& ast, std::size_t limit) {
    std::vector<bool> out(limit + 1, false);
    using Kind = RegexAst::Kind;
    auto concat2 = [limit](const std::vector<bool>& a, const std::vector<bool>& b) {
        std::vector<bool> r(limit + 1, false);
        for (std::size_t i = 0; i <= limit; ++i)
            if (a[i])
                for (std::size_t j = 0; i + j <= limit; ++j)
                    if (b[j])
                        r[i + j] = true;
        return r;
    };
    switch (ast.kind) {
    case Kind::literal:
        if (ast.count <= limit)
            out[ast.count] = true;
        return out;
    case Kind::concat: {
        out[0] = true;
        for (const auto& c : ast.children)
            out = concat2(out, language_upto(c, limit));
        return out;
    }
    case Kind::alternation:
        for (const auto& c : ast.children) {
            const auto l = language_upto(c, limit);
            for (std::size_t i = 0; i <= limit; ++i)
                out[i] = out[i] || l[i];
        }
        return out;
    case Kind::star: {
        const auto body = language_upto(ast.children.front(), limit);
        out[0] = true;
        while (true) {
            auto grown = concat2(out, body);
            for (std::size_t i = 0; i <= limit; ++i)
                grown[i] = grown[i] || out[i];
            if (grown == out)
                return out;
            out = std::move(grown);
        }
    }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Systems

struct GenOptions {
    std::size_t max_neurons = 4;
    std::size_t max_rules = 6;
    std::int64_t max_spikes = 5;
    std::int64_t max_delay = 0; // 0: delay-free systems
    bool require_rules = true;
};

inline RegexAst random_guard(std::mt19937_64& rng, std::int64_t c) {
    const auto uc = static_cast<std::uint32_t>(c);
    std::uniform_int_distribution<int> pick(0, 5);
    std::uniform_int_distribution<std::uint32_t> small(1, 3);
    switch (pick(rng)) {
    case 0:
    case 1:
        return RegexAst::literal(uc);
    case 2: // a^c (a^k)*
        return RegexAst::concat({RegexAst::literal(uc), RegexAst::star(RegexAst::literal(small(rng)))});
    case 3:
        return RegexAst::literal(uc + small(rng));
    case 4:
        return RegexAst::alternation({RegexAst::literal(uc), RegexAst::literal(uc + small(rng))});
    default: // may admit fewer than c spikes
        return RegexAst::star(RegexAst::literal(small(rng)));
    }
}

/// Random system that passes validation.
inline SnpSystem random_system(std::mt19937_64& rng, const GenOptions& opt = {}) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        SnpSystem sys;
        const std::size_t m = std::uniform_int_distribution<std::size_t>(1, opt.max_neurons)(rng);
        for (std::size_t j = 0; j < m; ++j)
            sys.neurons.push_back({"n" + std::to_string(j + 1),
                                   std::uniform_int_distribution<std::int64_t>(0, opt.max_spikes)(rng)});
        const std::size_t n =
            std::uniform_int_distribution<std::size_t>(opt.require_rules ? 1 : 0, opt.max_rules)(rng);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t owner = std::uniform_int_distribution<std::size_t>(0, m - 1)(rng);
            const std::int64_t c = std::uniform_int_distribution<std::int64_t>(1, 3)(rng);
            if (coin(rng) < 0.25) {
                sys.rules.push_back(Rule::plain(owner, c, 0, 0));
                continue;
            }
            const std::int64_t p = std::uniform_int_distribution<std::int64_t>(1, c)(rng);
            const std::int64_t d =
                opt.max_delay > 0 && coin(rng) < 0.4 ? std::uniform_int_distribution<std::int64_t>(1, opt.max_delay)(rng)
                                                     : 0;
            sys.rules.emplace_back(owner, random_guard(rng, c), c, p, d);
        }
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < m; ++b)
                if (a != b && coin(rng) < 0.45)
                    sys.synapses.emplace_back(a, b);
        if (coin(rng) < 0.7)
            sys.output = std::uniform_int_distribution<std::size_t>(0, m - 1)(rng);
        if (snp::validate(sys).ok())
            return sys;
    }
    throw std::runtime_error("random_system: no valid system generated");
}

/// Random configuration with entries in [0, max].
inline IntVector random_config(std::mt19937_64& rng, std::size_t m, std::int64_t max) {
    IntVector c(m);
    for (auto& v : c)
        v = std::uniform_int_distribution<std::int64_t>(0, max)(rng);
    return c;
}

/// Spiking vectors by brute force over all 2^n 0/1 vectors, checked against
/// the definition: every open neuron with an applicable rule uses exactly
/// one, nothing else fires, and at least one rule fires.
inline std::vector<IntVector> brute_force_spiking_vectors(const SnpSystem& sys, const IntVector& config,
                                                          const IntVector& st) {
    const std::size_t n = sys.rule_count();
    std::vector<IntVector> out;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        IntVector sp(n, 0);
        std::vector<int> used(sys.neuron_count(), 0);
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
            if (!((mask >> i) & 1U))
                continue;
            sp[i] = 1;
            const Rule& r = sys.rules[i];
            const std::int64_t have = config[r.owner];
            ok = st[r.owner] == 1 && have >= r.consume && language_upto(r.guard, static_cast<std::size_t>(have))[have];
            ++used[r.owner];
        }
        if (!ok)
            continue;
        for (std::size_t j = 0; j < sys.neuron_count() && ok; ++j) {
            bool any = false;
            for (std::size_t i : sys.rules_of(j)) {
                const Rule& r = sys.rules[i];
                any = any || (st[j] == 1 && config[j] >= r.consume &&
                              language_upto(r.guard, static_cast<std::size_t>(config[j]))[config[j]]);
            }
            ok = used[j] == (any ? 1 : 0);
        }
        if (ok)
            out.push_back(sp);
    }
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

inline IntVector zeros(std::size_t n) { return IntVector(n, 0); }
inline IntVector ones(std::size_t n) { return IntVector(n, 1); }

} // namespace snp_test

#endif // SNP_TESTS_SUPPORT_HPP
