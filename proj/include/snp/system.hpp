#ifndef SNP_SYSTEM_HPP
#define SNP_SYSTEM_HPP

// Static model of a spiking neural P system, its text format, and validation.
//
// File format (line oriented, '#' starts a comment):
//
//   neuron <name> spikes=<uint>
//   rule <name> [E=<regex>] c=<uint> p=<uint> d=<uint>
//   syn <name> <name>
//   out <name>
//   in <name>
//
// `rule` lines name the owning neuron. p=0 is a forgetting rule a^c -> lambda.
// A missing E means E = a^c. Rule order in the file is the rule order r_1..r_n
// used by every matrix and rule-indexed vector.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "snp/int_matrix.hpp"
#include "snp/unary_regex.hpp"

namespace snp {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

struct Rule {
    std::size_t owner = 0;
    RegexAst guard;
    SemilinearMembership language;
    std::int64_t consume = 1;
    std::int64_t produce = 1; // 0 marks a forgetting rule
    std::int64_t delay = 0;

    Rule() = default;
    Rule(std::size_t owner_, RegexAst guard_, std::int64_t c, std::int64_t p, std::int64_t d)
        : owner(owner_), guard(std::move(guard_)), language(compile(guard)), consume(c), produce(p), delay(d) {}

    /// Guard omitted: E = a^c.
    static Rule plain(std::size_t owner, std::int64_t c, std::int64_t p, std::int64_t d = 0) {
        return Rule(owner, RegexAst::literal(static_cast<std::uint32_t>(c)), c, p, d);
    }

    bool is_forgetting() const { return produce == 0; }

    /// a^spikes in L(E) and enough spikes to consume.
    bool applicable(std::int64_t spikes) const {
        return spikes >= consume && language.matches(static_cast<std::uint64_t>(spikes));
    }

    friend bool operator==(const Rule& a, const Rule& b) {
        return a.owner == b.owner && a.guard == b.guard && a.consume == b.consume && a.produce == b.produce &&
               a.delay == b.delay;
    }
};

struct Neuron {
    std::string name;
    std::int64_t initial_spikes = 0;

    friend bool operator==(const Neuron&, const Neuron&) = default;
};

using Synapse = std::pair<std::size_t, std::size_t>;

struct SnpSystem {
    std::vector<Neuron> neurons;
    std::vector<Rule> rules;
    std::vector<Synapse> synapses;
    std::optional<std::size_t> input;  // stored only; no runtime semantics
    std::optional<std::size_t> output;

    std::size_t neuron_count() const { return neurons.size(); }
    std::size_t rule_count() const { return rules.size(); }

    IntVector initial_configuration() const {
        IntVector c;
        c.reserve(neurons.size());
        for (const auto& n : neurons)
            c.push_back(n.initial_spikes);
        return c;
    }

    IntVector delays() const {
        IntVector d;
        d.reserve(rules.size());
        for (const auto& r : rules)
            d.push_back(r.delay);
        return d;
    }

    bool has_delays() const {
        return std::any_of(rules.begin(), rules.end(), [](const Rule& r) { return r.delay > 0; });
    }

    std::vector<std::size_t> rules_of(std::size_t neuron) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < rules.size(); ++i)
            if (rules[i].owner == neuron)
                out.push_back(i);
        return out;
    }

    std::vector<std::size_t> targets_of(std::size_t neuron) const {
        std::vector<std::size_t> out;
        for (const auto& [from, to] : synapses)
            if (from == neuron)
                out.push_back(to);
        return out;
    }

    std::optional<std::size_t> find_neuron(std::string_view name) const {
        for (std::size_t i = 0; i < neurons.size(); ++i)
            if (neurons[i].name == name)
                return i;
        return std::nullopt;
    }

    friend bool operator==(const SnpSystem&, const SnpSystem&) = default;
};

namespace detail {

inline std::vector<std::string> split_words(std::string_view line) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
            ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r')
            ++j;
        if (j > i)
            out.emplace_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

inline std::int64_t parse_uint(std::size_t line, std::string_view key, std::string_view text) {
    if (text.empty())
        throw ParseError(line, "missing value for " + std::string(key));
    std::int64_t v = 0;
    for (char ch : text) {
        if (ch < '0' || ch > '9')
            throw ParseError(line, "expected unsigned integer for " + std::string(key) + ", got '" +
                                       std::string(text) + "'");
        v = v * 10 + (ch - '0');
        if (v > (std::int64_t{1} << 40))
            throw ParseError(line, "value too large for " + std::string(key));
    }
    return v;
}

} // namespace detail

inline SnpSystem parse_system(std::string_view text) {
    SnpSystem sys;
    std::set<Synapse> seen_synapses;
    std::size_t line_no = 0;
    std::size_t pos = 0;

    auto neuron_index = [&](std::size_t line, const std::string& name) {
        auto idx = sys.find_neuron(name);
        if (!idx)
            throw ParseError(line, "unknown neuron '" + name + "'");
        return *idx;
    };

    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos)
            end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        const auto words = detail::split_words(line);
        if (words.empty()) {
            if (end == text.size())
                break;
            continue;
        }
        const std::string& kw = words[0];
        if (kw == "neuron") {
            if (words.size() != 3 || words[2].rfind("spikes=", 0) != 0)
                throw ParseError(line_no, "expected 'neuron <name> spikes=<uint>'");
            if (sys.find_neuron(words[1]))
                throw ParseError(line_no, "duplicate neuron '" + words[1] + "'");
            sys.neurons.push_back({words[1], detail::parse_uint(line_no, "spikes", words[2].substr(7))});
        } else if (kw == "rule") {
            if (words.size() < 2)
                throw ParseError(line_no, "expected 'rule <name> [E=<regex>] c=<uint> p=<uint> d=<uint>'");
            const std::size_t owner = neuron_index(line_no, words[1]);
            std::optional<RegexAst> guard;
            std::optional<std::int64_t> c, p, d;
            for (std::size_t w = 2; w < words.size(); ++w) {
                const std::string& field = words[w];
                const auto eq = field.find('=');
                if (eq == std::string::npos)
                    throw ParseError(line_no, "expected key=value, got '" + field + "'");
                const std::string key = field.substr(0, eq);
                const std::string value = field.substr(eq + 1);
                auto once = [&](bool present) {
                    if (present)
                        throw ParseError(line_no, "duplicate field '" + key + "'");
                };
                if (key == "E") {
                    once(guard.has_value());
                    try {
                        guard = parse_regex(value);
                    } catch (const RegexSyntaxError& e) {
                        throw ParseError(line_no, std::string("bad regex: ") + e.what());
                    }
                } else if (key == "c") {
                    once(c.has_value());
                    c = detail::parse_uint(line_no, key, value);
                } else if (key == "p") {
                    once(p.has_value());
                    p = detail::parse_uint(line_no, key, value);
                } else if (key == "d") {
                    once(d.has_value());
                    d = detail::parse_uint(line_no, key, value);
                } else {
                    throw ParseError(line_no, "unknown rule field '" + key + "'");
                }
            }
            if (!c || !p)
                throw ParseError(line_no, "rule needs c= and p=");
            if (*c > (1 << 20))
                throw ParseError(line_no, "c too large");
            RegexAst g = guard ? std::move(*guard) : RegexAst::literal(static_cast<std::uint32_t>(*c));
            sys.rules.emplace_back(owner, std::move(g), *c, *p, d.value_or(0));
        } else if (kw == "syn") {
            if (words.size() != 3)
                throw ParseError(line_no, "expected 'syn <name> <name>'");
            Synapse s{neuron_index(line_no, words[1]), neuron_index(line_no, words[2])};
            if (!seen_synapses.insert(s).second)
                throw ParseError(line_no, "duplicate synapse " + words[1] + " -> " + words[2]);
            sys.synapses.push_back(s);
        } else if (kw == "out" || kw == "in") {
            if (words.size() != 2)
                throw ParseError(line_no, "expected '" + kw + " <name>'");
            auto& slot = kw == "out" ? sys.output : sys.input;
            if (slot)
                throw ParseError(line_no, "'" + kw + "' declared twice");
            slot = neuron_index(line_no, words[1]);
        } else {
            throw ParseError(line_no, "unknown directive '" + kw + "'");
        }
        if (end == text.size())
            break;
    }
    return sys;
}

/// Canonical text form; parse_system(serialize_system(s)) == s.
inline std::string serialize_system(const SnpSystem& sys) {
    std::ostringstream out;
    for (const auto& n : sys.neurons)
        out << "neuron " << n.name << " spikes=" << n.initial_spikes << '\n';
    for (const auto& r : sys.rules) {
        out << "rule " << sys.neurons.at(r.owner).name;
        if (!(r.guard == RegexAst::literal(static_cast<std::uint32_t>(r.consume))))
            out << " E=" << to_string(r.guard);
        out << " c=" << r.consume << " p=" << r.produce << " d=" << r.delay << '\n';
    }
    for (const auto& [from, to] : sys.synapses)
        out << "syn " << sys.neurons.at(from).name << ' ' << sys.neurons.at(to).name << '\n';
    if (sys.output)
        out << "out " << sys.neurons.at(*sys.output).name << '\n';
    if (sys.input)
        out << "in " << sys.neurons.at(*sys.input).name << '\n';
    return out.str();
}

enum class Severity { error, warning };

struct Issue {
    Severity severity = Severity::error;
    std::string code;
    std::string message;
    std::string location;
};

struct ValidationReport {
    std::vector<Issue> issues;

    bool ok() const {
        return std::none_of(issues.begin(), issues.end(),
                            [](const Issue& i) { return i.severity == Severity::error; });
    }

    std::vector<std::string> error_codes() const {
        std::vector<std::string> out;
        for (const auto& i : issues)
            if (i.severity == Severity::error)
                out.push_back(i.code);
        return out;
    }
};

inline ValidationReport validate(const SnpSystem& sys) {
    ValidationReport report;
    const std::size_t m = sys.neuron_count();
    auto error = [&](std::string code, std::string msg, std::string loc) {
        report.issues.push_back({Severity::error, std::move(code), std::move(msg), std::move(loc)});
    };
    auto warn = [&](std::string code, std::string msg, std::string loc) {
        report.issues.push_back({Severity::warning, std::move(code), std::move(msg), std::move(loc)});
    };
    auto rule_loc = [](std::size_t i) { return "r" + std::to_string(i + 1); };

    if (m == 0)
        error("no-neurons", "system has no neurons", "system");
    for (std::size_t j = 0; j < m; ++j)
        if (sys.neurons[j].initial_spikes < 0)
            error("negative-spikes", "initial spike count is negative", sys.neurons[j].name);

    for (std::size_t i = 0; i < sys.rules.size(); ++i) {
        const Rule& r = sys.rules[i];
        const std::string loc = rule_loc(i);
        if (r.owner >= m) {
            error("rule-owner-range", "rule owner index out of range", loc);
            continue;
        }
        if (r.consume < 1)
            error("consume-zero", "a rule must consume at least one spike", loc);
        if (r.produce < 0 || r.delay < 0)
            error("negative-value", "produce and delay must be non-negative", loc);
        if (r.is_forgetting()) {
            if (r.delay != 0)
                error("forgetting-delay", "forgetting rules cannot carry a delay", loc);
            if (r.consume >= 1 && !r.language.is_singleton(static_cast<std::uint64_t>(r.consume)))
                error("forgetting-guard", "forgetting rule guard must be exactly a^" + std::to_string(r.consume),
                      loc);
        } else if (r.produce > r.consume) {
            error("produce-exceeds-consume", "spiking rule needs c >= p", loc);
        }
        if (!r.is_forgetting() && r.consume >= 1) {
            auto least = r.language.min_accepted();
            if (least && static_cast<std::int64_t>(*least) < r.consume)
                warn("guard-below-consume",
                     "guard admits a^" + std::to_string(*least) + " with fewer than c spikes; rule stays inapplicable there",
                     loc);
            if (!least)
                warn("guard-empty", "guard language is empty; rule never applies", loc);
        }
    }

    // a^s -> lambda excludes a^s from every spiking guard of the same neuron.
    for (std::size_t f = 0; f < sys.rules.size(); ++f) {
        const Rule& forget = sys.rules[f];
        if (!forget.is_forgetting() || forget.owner >= m || forget.consume < 1)
            continue;
        for (std::size_t s = 0; s < sys.rules.size(); ++s) {
            const Rule& spike = sys.rules[s];
            if (spike.is_forgetting() || spike.owner != forget.owner)
                continue;
            if (spike.language.matches(static_cast<std::uint64_t>(forget.consume)))
                error("forgetting-overlap",
                      "a^" + std::to_string(forget.consume) + " is forgotten by " + rule_loc(f) +
                          " but also matches the guard of " + rule_loc(s),
                      rule_loc(f));
        }
    }

    std::set<Synapse> seen;
    for (const auto& s : sys.synapses) {
        const std::string loc = "syn(" + std::to_string(s.first + 1) + "," + std::to_string(s.second + 1) + ")";
        if (s.first >= m || s.second >= m) {
            error("synapse-range", "synapse endpoint out of range", loc);
            continue;
        }
        if (s.first == s.second)
            error("synapse-self-loop", "synapses must connect distinct neurons", loc);
        if (!seen.insert(s).second)
            error("synapse-duplicate", "duplicate synapse", loc);
    }
    if (sys.output && *sys.output >= m)
        error("io-range", "output neuron out of range", "out");
    if (sys.input && *sys.input >= m)
        error("io-range", "input neuron out of range", "in");
    if (sys.input)
        warn("input-inert", "input neuron is recorded but receives no external spikes", "in");
    return report;
}

} // namespace snp

#endif // SNP_SYSTEM_HPP
