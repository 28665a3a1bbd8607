#ifndef SNP_UNARY_REGEX_HPP
#define SNP_UNARY_REGEX_HPP

// Regular expressions over the one-letter alphabet {a}.
//
// Grammar:
//   E      ::= term ('|' term)*
//   term   ::= factor+
//   factor ::= base '*'?
//   base   ::= 'a' ('^' uint)? | '(' E ')'
//
// Every unary regular language is ultimately periodic, so a compiled
// expression is stored as the lasso of its deterministic automaton: a tail of
// `threshold` states followed by a cycle of `period` states.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace snp {

class RegexSyntaxError : public std::runtime_error {
public:
    RegexSyntaxError(std::size_t offset, const std::string& what)
        : std::runtime_error("regex offset " + std::to_string(offset) + ": " + what), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

struct RegexAst {
    enum class Kind { literal, concat, alternation, star };

    Kind kind = Kind::literal;
    std::uint32_t count = 0; // literal only; 0 is the empty word
    std::vector<RegexAst> children;

    static RegexAst literal(std::uint32_t n) { return RegexAst{Kind::literal, n, {}}; }
    static RegexAst star(RegexAst child) {
        RegexAst node{Kind::star, 0, {}};
        node.children.push_back(std::move(child));
        return node;
    }
    static RegexAst concat(std::vector<RegexAst> parts);
    static RegexAst alternation(std::vector<RegexAst> parts);

    friend bool operator==(const RegexAst&, const RegexAst&) = default;
};

// Smart constructors keep the tree in normal form: nested concatenations and
// alternations are flattened, adjacent literals in a concatenation merge, and
// single-child nodes collapse to the child.
inline RegexAst RegexAst::concat(std::vector<RegexAst> parts) {
    std::vector<RegexAst> flat;
    for (auto& part : parts) {
        std::vector<RegexAst> pieces;
        if (part.kind == Kind::concat)
            pieces = std::move(part.children);
        else
            pieces.push_back(std::move(part));
        for (auto& piece : pieces) {
            if (piece.kind == Kind::literal) {
                if (piece.count == 0)
                    continue;
                if (!flat.empty() && flat.back().kind == Kind::literal) {
                    flat.back().count += piece.count;
                    continue;
                }
            }
            flat.push_back(std::move(piece));
        }
    }
    if (flat.empty())
        return literal(0);
    if (flat.size() == 1)
        return std::move(flat.front());
    RegexAst node{Kind::concat, 0, {}};
    node.children = std::move(flat);
    return node;
}

inline RegexAst RegexAst::alternation(std::vector<RegexAst> parts) {
    std::vector<RegexAst> flat;
    for (auto& part : parts) {
        if (part.kind == Kind::alternation)
            for (auto& c : part.children)
                flat.push_back(std::move(c));
        else
            flat.push_back(std::move(part));
    }
    if (flat.size() == 1)
        return std::move(flat.front());
    RegexAst node{Kind::alternation, 0, {}};
    node.children = std::move(flat);
    return node;
}

/// Rebuilds `ast` through the smart constructors.
inline RegexAst normalize(const RegexAst& ast) {
    switch (ast.kind) {
    case RegexAst::Kind::literal:
        return ast;
    case RegexAst::Kind::star:
        return RegexAst::star(normalize(ast.children.front()));
    case RegexAst::Kind::concat:
    case RegexAst::Kind::alternation: {
        std::vector<RegexAst> parts;
        for (const auto& c : ast.children)
            parts.push_back(normalize(c));
        return ast.kind == RegexAst::Kind::concat ? RegexAst::concat(std::move(parts))
                                                  : RegexAst::alternation(std::move(parts));
    }
    }
    return ast;
}

namespace detail {

class RegexParser {
public:
    explicit RegexParser(std::string_view src) : src_(src) {}

    RegexAst parse() {
        skip_space();
        if (at_end())
            fail("empty expression");
        RegexAst ast = expression();
        if (!at_end())
            fail(std::string("unexpected '") + src_[pos_] + "'");
        if (!lambda_offsets_.empty())
            throw RegexSyntaxError(lambda_offsets_.front(), "a^0 is only allowed under '*'");
        return ast;
    }

private:
    static constexpr std::uint64_t max_literal = 1u << 20;

    std::string_view src_;
    std::size_t pos_ = 0;
    std::vector<std::size_t> lambda_offsets_;

    bool at_end() const { return pos_ >= src_.size(); }
    char peek() const { return src_[pos_]; }

    [[noreturn]] void fail(const std::string& what) const { throw RegexSyntaxError(pos_, what); }

    void skip_space() {
        while (!at_end() && (peek() == ' ' || peek() == '\t'))
            ++pos_;
    }

    RegexAst expression() {
        std::vector<RegexAst> terms;
        terms.push_back(term());
        while (!at_end() && peek() == '|') {
            ++pos_;
            skip_space();
            terms.push_back(term());
        }
        return RegexAst::alternation(std::move(terms));
    }

    RegexAst term() {
        std::vector<RegexAst> factors;
        while (!at_end() && (peek() == 'a' || peek() == '('))
            factors.push_back(factor());
        if (factors.empty())
            fail(at_end() ? "expected 'a' or '('" : std::string("expected 'a' or '(' before '") + peek() + "'");
        return RegexAst::concat(std::move(factors));
    }

    RegexAst factor() {
        const std::size_t lambda_mark = lambda_offsets_.size();
        RegexAst node = base();
        skip_space();
        if (!at_end() && peek() == '*') {
            ++pos_;
            skip_space();
            lambda_offsets_.resize(lambda_mark);
            return RegexAst::star(std::move(node));
        }
        return node;
    }

    RegexAst base() {
        if (peek() == '(') {
            ++pos_;
            skip_space();
            RegexAst inner = expression();
            if (at_end() || peek() != ')')
                fail("expected ')'");
            ++pos_;
            return inner;
        }
        const std::size_t start = pos_;
        ++pos_; // 'a'
        skip_space();
        if (at_end() || peek() != '^')
            return RegexAst::literal(1);
        ++pos_;
        skip_space();
        if (at_end() || peek() < '0' || peek() > '9')
            fail("expected exponent after '^'");
        std::uint64_t value = 0;
        while (!at_end() && peek() >= '0' && peek() <= '9') {
            value = value * 10 + static_cast<std::uint64_t>(peek() - '0');
            if (value > max_literal)
                fail("exponent too large");
            ++pos_;
        }
        skip_space();
        if (value == 0)
            lambda_offsets_.push_back(start);
        return RegexAst::literal(static_cast<std::uint32_t>(value));
    }
};

inline void print_into(const RegexAst& ast, std::string& out) {
    using Kind = RegexAst::Kind;
    switch (ast.kind) {
    case Kind::literal:
        out += 'a';
        if (ast.count != 1) {
            out += '^';
            out += std::to_string(ast.count);
        }
        break;
    case Kind::concat:
        for (const auto& c : ast.children) {
            const bool wrap = c.kind == Kind::alternation || c.kind == Kind::concat;
            if (wrap)
                out += '(';
            print_into(c, out);
            if (wrap)
                out += ')';
        }
        break;
    case Kind::alternation:
        for (std::size_t i = 0; i < ast.children.size(); ++i) {
            if (i)
                out += '|';
            const bool wrap = ast.children[i].kind == Kind::alternation;
            if (wrap)
                out += '(';
            print_into(ast.children[i], out);
            if (wrap)
                out += ')';
        }
        break;
    case Kind::star: {
        const RegexAst& c = ast.children.front();
        if (c.kind == Kind::literal && c.count == 1) {
            out += "a*";
        } else {
            out += '(';
            print_into(c, out);
            out += ")*";
        }
        break;
    }
    }
}

} // namespace detail

inline RegexAst parse_regex(std::string_view src) { return detail::RegexParser(src).parse(); }

inline std::string to_string(const RegexAst& ast) {
    std::string out;
    detail::print_into(ast, out);
    return out;
}

/// Thompson automaton over {a}; state 0 is the start state.
struct UnaryNfa {
    struct State {
        std::vector<std::size_t> epsilon;
        std::vector<std::size_t> on_a;
    };
    std::vector<State> states;
    std::size_t accept = 0;

    std::vector<bool> closure(std::vector<bool> set) const {
        std::vector<std::size_t> stack;
        for (std::size_t s = 0; s < set.size(); ++s)
            if (set[s])
                stack.push_back(s);
        while (!stack.empty()) {
            const std::size_t s = stack.back();
            stack.pop_back();
            for (std::size_t t : states[s].epsilon)
                if (!set[t]) {
                    set[t] = true;
                    stack.push_back(t);
                }
        }
        return set;
    }

    std::vector<bool> step(const std::vector<bool>& set) const {
        std::vector<bool> next(states.size(), false);
        for (std::size_t s = 0; s < set.size(); ++s)
            if (set[s])
                for (std::size_t t : states[s].on_a)
                    next[t] = true;
        return closure(std::move(next));
    }

    std::vector<bool> initial() const {
        std::vector<bool> set(states.size(), false);
        set[0] = true;
        return closure(std::move(set));
    }

    /// Direct step simulation over a^n.
    bool accepts(std::uint64_t n) const {
        auto set = initial();
        for (std::uint64_t i = 0; i < n; ++i)
            set = step(set);
        return set[accept];
    }
};

namespace detail {

struct Fragment {
    std::size_t start;
    std::size_t end;
};

inline Fragment build_fragment(const RegexAst& ast, UnaryNfa& nfa) {
    auto fresh = [&nfa] {
        nfa.states.emplace_back();
        return nfa.states.size() - 1;
    };
    switch (ast.kind) {
    case RegexAst::Kind::literal: {
        const std::size_t start = fresh();
        std::size_t cur = start;
        for (std::uint32_t i = 0; i < ast.count; ++i) {
            const std::size_t next = fresh();
            nfa.states[cur].on_a.push_back(next);
            cur = next;
        }
        return {start, cur};
    }
    case RegexAst::Kind::concat: {
        Fragment whole = build_fragment(ast.children.front(), nfa);
        for (std::size_t i = 1; i < ast.children.size(); ++i) {
            Fragment next = build_fragment(ast.children[i], nfa);
            nfa.states[whole.end].epsilon.push_back(next.start);
            whole.end = next.end;
        }
        return whole;
    }
    case RegexAst::Kind::alternation: {
        const std::size_t start = fresh();
        const std::size_t end = fresh();
        for (const auto& c : ast.children) {
            Fragment f = build_fragment(c, nfa);
            nfa.states[start].epsilon.push_back(f.start);
            nfa.states[f.end].epsilon.push_back(end);
        }
        return {start, end};
    }
    case RegexAst::Kind::star: {
        const std::size_t start = fresh();
        const std::size_t end = fresh();
        Fragment f = build_fragment(ast.children.front(), nfa);
        nfa.states[start].epsilon.push_back(f.start);
        nfa.states[start].epsilon.push_back(end);
        nfa.states[f.end].epsilon.push_back(f.start);
        nfa.states[f.end].epsilon.push_back(end);
        return {start, end};
    }
    }
    throw std::logic_error("unreachable regex node kind");
}

} // namespace detail

inline UnaryNfa build_nfa(const RegexAst& ast) {
    UnaryNfa nfa;
    const detail::Fragment f = detail::build_fragment(ast, nfa);
    // build_fragment allocates the outermost start first, so it is state 0.
    if (f.start != 0)
        throw std::logic_error("nfa start state must be 0");
    nfa.accept = f.end;
    return nfa;
}

/// Membership oracle for a^n in L(E), answered in O(1) from the lasso.
class SemilinearMembership {
public:
    SemilinearMembership() : threshold_(1), period_(1), accepting_{false, false} {}

    bool matches(std::uint64_t n) const {
        if (n < accepting_.size())
            return accepting_[n];
        return accepting_[threshold_ + (n - threshold_) % period_];
    }

    /// Tail length T: for n >= T, matches(n) == matches(n + P).
    std::size_t threshold() const { return threshold_; }
    std::size_t period() const { return period_; }
    /// Lasso states: T tail states plus P cycle states.
    std::size_t state_count() const { return accepting_.size(); }

    /// Residues r in [0, P) with a^(T + r) in L(E).
    std::vector<std::size_t> residues() const {
        std::vector<std::size_t> out;
        for (std::size_t r = 0; r < period_; ++r)
            if (accepting_[threshold_ + r])
                out.push_back(r);
        return out;
    }

    /// True iff the language is exactly {a^n}.
    bool is_singleton(std::uint64_t n) const {
        // Accepted lengths inside the cycle recur every period.
        if (!matches(n) || n >= threshold_)
            return false;
        for (std::size_t i = 0; i < accepting_.size(); ++i)
            if (accepting_[i] && i != n)
                return false;
        return true;
    }

    /// Smallest accepted length, if any.
    std::optional<std::uint64_t> min_accepted() const {
        for (std::size_t i = 0; i < accepting_.size(); ++i)
            if (accepting_[i])
                return i;
        return std::nullopt;
    }

    friend SemilinearMembership compile(const RegexAst& ast);

private:
    // Shrinks to the least period, then the shortest tail.
    void minimize() {
        for (std::size_t p = 1; p < period_; ++p) {
            if (period_ % p != 0)
                continue;
            bool ok = true;
            for (std::size_t r = 0; ok && r + p < period_; ++r)
                ok = accepting_[threshold_ + r] == accepting_[threshold_ + r + p];
            if (ok) {
                period_ = p;
                break;
            }
        }
        while (threshold_ > 0 && accepting_[threshold_ - 1] == accepting_[threshold_ - 1 + period_])
            --threshold_;
        accepting_.resize(threshold_ + period_);
    }

    std::size_t threshold_;
    std::size_t period_;
    std::vector<bool> accepting_; // size threshold_ + period_
};

inline SemilinearMembership compile(const RegexAst& ast) {
    const UnaryNfa nfa = build_nfa(ast);
    std::map<std::vector<bool>, std::size_t> seen;
    std::vector<bool> accepting;
    std::vector<bool> current = nfa.initial();
    while (true) {
        auto [it, inserted] = seen.emplace(current, accepting.size());
        if (!inserted) {
            SemilinearMembership m;
            m.threshold_ = it->second;
            m.period_ = accepting.size() - it->second;
            m.accepting_ = std::move(accepting);
            m.minimize();
            return m;
        }
        accepting.push_back(current[nfa.accept]);
        current = nfa.step(current);
    }
}

inline SemilinearMembership compile(std::string_view src) { return compile(parse_regex(src)); }

} // namespace snp

#endif // SNP_UNARY_REGEX_HPP
