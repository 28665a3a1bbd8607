#ifndef SNP_REACHABILITY_HPP
#define SNP_REACHABILITY_HPP

// k-reachability for delay-free systems. A target C is reachable in k steps
// iff C = C0 + s·M for some s that is the sum of k valid spiking vectors. The
// candidates s come from the integer solution lattice of s·M = C - C0; each
// candidate is then split back into spiking vectors by backtracking.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "snp/engine.hpp"
#include "snp/int_matrix.hpp"
#include "snp/linalg.hpp"
#include "snp/matrices.hpp"
#include "snp/system.hpp"

namespace snp {

/// Reachability was asked of a system with delays.
class UnsupportedSystem : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

inline std::int64_t vector_sum(const IntVector& v) { return std::accumulate(v.begin(), v.end(), std::int64_t{0}); }

/// Nonnegative integer s with s·M = target - origin and sum(s) <= k_max·m,
/// ordered by sum and then lexicographically.
inline std::vector<IntVector> sum_vector_solutions(const IntMatrix& spiking, const IntVector& origin,
                                                   const IntVector& target, std::size_t k_max) {
    if (origin.size() != spiking.cols() || target.size() != spiking.cols())
        throw std::invalid_argument("sum_vector_solutions: configuration length does not match the matrix");
    const auto lattice = solve_integer(spiking.transposed(), subtract(target, origin));
    std::vector<IntVector> out;
    if (!lattice)
        return out;
    const auto bound = static_cast<std::int64_t>(k_max * spiking.cols());
    enumerate_bounded(*lattice, bound, [&](const IntVector& s) { out.push_back(s); });
    std::sort(out.begin(), out.end(), [](const IntVector& a, const IntVector& b) {
        const auto sa = vector_sum(a), sb = vector_sum(b);
        return sa != sb ? sa < sb : a < b;
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

enum class Verdict { reachable, not_reachable, invalid_target };

inline const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::reachable:
        return "reachable";
    case Verdict::not_reachable:
        return "not-reachable-within-bounds";
    case Verdict::invalid_target:
        return "invalid-target";
    }
    return "?";
}

namespace reason {
inline constexpr const char* negative_residual = "not a valid sum vector";
inline constexpr const char* invalid_spiking_vector = "not a valid spiking vector";
inline constexpr const char* no_applicable_rule = "no applicable rule";
inline constexpr const char* exceeds_bound = "bound exhausted";
inline constexpr const char* cannot_improve = "cannot beat a shorter decomposition";
} // namespace reason

/// One row of a failed decomposition: at step i from configuration C(i),
/// trying Sp(i) left `residual` (or `residual` itself was the problem when
/// sp is absent).
struct FailureRow {
    std::size_t i = 0;
    IntVector residual;
    std::optional<IntVector> sp;
    IntVector config;
    std::string reason;
};

struct CandidateReport {
    IntVector sum_vector;
    std::optional<std::size_t> k; // set when the candidate decomposes
    std::vector<FailureRow> failures;
};

struct ReachabilityCertificate {
    Verdict verdict = Verdict::not_reachable;
    std::optional<std::size_t> k;
    IntVector origin;
    IntVector target;
    std::vector<IntVector> configurations;  // k + 1 entries on success
    std::vector<IntVector> spiking_vectors; // k entries on success
    std::optional<IntVector> sum_vector;
    std::vector<CandidateReport> candidates;
    std::string message;
};

/// Splits `sum` into the fewest valid spiking vectors starting at `origin`.
/// The residual alone determines the configuration (C = origin + (sum -
/// residual)·M), so failed residuals are memoized. At most `max_rows`
/// failure rows are kept.
inline ReachabilityCertificate decompose_sum_vector(const SnpSystem& sys, const IntVector& origin,
                                                    const IntVector& sum, std::size_t max_rows = 32) {
    const IntMatrix spiking = spiking_matrix(sys);
    if (sum.size() != sys.rule_count())
        throw std::invalid_argument("sum vector length must equal the rule count");
    ReachabilityCertificate cert;
    cert.origin = origin;
    cert.target = add(origin, row_times(sum, spiking));
    cert.sum_vector = sum;
    CandidateReport report;
    report.sum_vector = sum;

    const IntVector all_open_status(sys.neuron_count(), 1);
    std::map<IntVector, std::optional<std::pair<std::size_t, IntVector>>> memo; // residual -> (steps, first Sp)
    auto log = [&](FailureRow row) {
        if (report.failures.size() < max_rows)
            report.failures.push_back(std::move(row));
    };

    std::function<std::optional<std::size_t>(const IntVector&, const IntVector&, std::size_t)> solve =
        [&](const IntVector& residual, const IntVector& config, std::size_t depth) -> std::optional<std::size_t> {
        if (std::all_of(residual.begin(), residual.end(), [](std::int64_t v) { return v == 0; }))
            return 0;
        if (auto it = memo.find(residual); it != memo.end())
            return it->second ? std::optional<std::size_t>(it->second->first) : std::nullopt;
        memo[residual] = std::nullopt; // guards against zero-progress loops

        const auto options = enumerate_spiking_vectors(sys, config, all_open_status);
        const bool binary = std::all_of(residual.begin(), residual.end(), [](std::int64_t v) { return v == 0 || v == 1; });
        if (binary && !is_valid_spiking_vector(sys, config, all_open_status, residual))
            log({depth, residual, std::nullopt, config, reason::invalid_spiking_vector});
        if (options.empty()) {
            log({depth, residual, std::nullopt, config, reason::no_applicable_rule});
            return std::nullopt;
        }
        std::optional<std::pair<std::size_t, IntVector>> best;
        for (const auto& sp : options) {
            IntVector rest = subtract(residual, sp);
            if (std::any_of(rest.begin(), rest.end(), [](std::int64_t v) { return v < 0; })) {
                log({depth, rest, sp, config, reason::negative_residual});
                continue;
            }
            const auto sub = solve(rest, add(config, row_times(sp, spiking)), depth + 1);
            if (sub && (!best || *sub + 1 < best->first))
                best = std::make_pair(*sub + 1, sp);
        }
        memo[residual] = best;
        return best ? std::optional<std::size_t>(best->first) : std::nullopt;
    };

    const auto steps = solve(sum, origin, 0);
    if (steps) {
        cert.verdict = Verdict::reachable;
        cert.k = steps;
        report.k = steps;
        IntVector residual = sum;
        IntVector config = origin;
        cert.configurations.push_back(config);
        while (vector_sum(residual) != 0) {
            const IntVector sp = memo.at(residual)->second;
            cert.spiking_vectors.push_back(sp);
            residual = subtract(residual, sp);
            config = step_no_delay(config, sp, spiking);
            cert.configurations.push_back(config);
        }
    } else {
        cert.verdict = Verdict::not_reachable;
        cert.message = "sum vector does not split into valid spiking vectors";
    }
    cert.candidates.push_back(std::move(report));
    return cert;
}

inline std::optional<std::string> target_problem(const SnpSystem& sys, const IntVector& config) {
    if (config.size() != sys.neuron_count())
        return "configuration has " + std::to_string(config.size()) + " entries, system has " +
               std::to_string(sys.neuron_count()) + " neurons";
    for (auto v : config)
        if (v < 0)
            return std::string("configuration has a negative entry");
    return std::nullopt;
}

/// Is `to` reachable from `from` within v_max steps?
inline ReachabilityCertificate reach_between(const SnpSystem& sys, const IntVector& from, const IntVector& to,
                                             std::size_t v_max) {
    if (sys.has_delays())
        throw UnsupportedSystem("reachability is only decided for systems without delays");
    ReachabilityCertificate cert;
    cert.origin = from;
    cert.target = to;
    for (const IntVector* c : {&from, &to}) {
        if (auto problem = target_problem(sys, *c)) {
            cert.verdict = Verdict::invalid_target;
            cert.message = *problem;
            return cert;
        }
    }
    const IntMatrix spiking = spiking_matrix(sys);
    const auto candidates = sum_vector_solutions(spiking, from, to, v_max);
    std::optional<ReachabilityCertificate> best;
    const auto m = static_cast<std::int64_t>(sys.neuron_count());
    for (const auto& s : candidates) {
        // A k-step decomposition has sum at most k·m.
        if (best && vector_sum(s) > static_cast<std::int64_t>(*best->k) * m) {
            cert.candidates.push_back({s, std::nullopt, {{0, s, std::nullopt, from, reason::cannot_improve}}});
            continue;
        }
        ReachabilityCertificate attempt = decompose_sum_vector(sys, from, s);
        CandidateReport report = attempt.candidates.front();
        if (attempt.verdict == Verdict::reachable && *attempt.k > v_max) {
            report.failures.push_back({0, s, std::nullopt, from, reason::exceeds_bound});
        } else if (attempt.verdict == Verdict::reachable && (!best || *attempt.k < *best->k)) {
            best = std::move(attempt);
        }
        cert.candidates.push_back(std::move(report));
    }
    if (best) {
        cert.verdict = Verdict::reachable;
        cert.k = best->k;
        cert.configurations = std::move(best->configurations);
        cert.spiking_vectors = std::move(best->spiking_vectors);
        cert.sum_vector = best->sum_vector;
    } else {
        cert.verdict = Verdict::not_reachable;
        cert.message = candidates.empty() ? "no nonnegative integer sum vector within the bound"
                                          : "no candidate sum vector splits into at most " + std::to_string(v_max) +
                                                " valid spiking vectors";
    }
    return cert;
}

inline ReachabilityCertificate is_reachable(const SnpSystem& sys, const IntVector& target, std::size_t k_max) {
    return reach_between(sys, sys.initial_configuration(), target, k_max);
}

// ---------------------------------------------------------------------------
// Breadth-first oracle

/// Every configuration reachable from `origin` in at most `depth` steps,
/// mapped to its shortest distance.
inline std::map<IntVector, std::size_t> bfs_reachable_set(const SnpSystem& sys, const IntVector& origin,
                                                          std::size_t depth) {
    if (sys.has_delays())
        throw UnsupportedSystem("the breadth-first oracle only handles systems without delays");
    const IntMatrix spiking = spiking_matrix(sys);
    const IntVector open(sys.neuron_count(), 1);
    std::map<IntVector, std::size_t> dist{{origin, 0}};
    std::deque<IntVector> frontier{origin};
    while (!frontier.empty()) {
        IntVector c = std::move(frontier.front());
        frontier.pop_front();
        const std::size_t d = dist.at(c);
        if (d == depth)
            continue;
        for (const auto& sp : enumerate_spiking_vectors(sys, c, open)) {
            IntVector next = step_no_delay(c, sp, spiking);
            if (dist.emplace(next, d + 1).second)
                frontier.push_back(std::move(next));
        }
    }
    return dist;
}

struct BfsVerdict {
    bool reachable = false;
    std::optional<std::size_t> k;
    std::size_t explored = 0;
};

inline BfsVerdict bfs_oracle_from(const SnpSystem& sys, const IntVector& origin, const IntVector& target,
                                  std::size_t k_max) {
    const auto dist = bfs_reachable_set(sys, origin, k_max);
    BfsVerdict v;
    v.explored = dist.size();
    if (auto it = dist.find(target); it != dist.end()) {
        v.reachable = true;
        v.k = it->second;
    }
    return v;
}

inline BfsVerdict bfs_oracle(const SnpSystem& sys, const IntVector& target, std::size_t k_max) {
    return bfs_oracle_from(sys, sys.initial_configuration(), target, k_max);
}

// ---------------------------------------------------------------------------
// Closed form for systems with delay

struct ClosedFormPrefix {
    std::size_t k = 0;     // prefix covers steps 0..k and predicts C(k+1)
    IntVector closed_form;
    IntVector recorded;
    IntVector v2_iterate; // C(0) pushed through the status-masked formula k+1 times
    bool matches_recorded() const { return closed_form == recorded; }
    bool matches_v2() const { return closed_form == v2_iterate; }
};

struct ClosedFormReport {
    std::vector<ClosedFormPrefix> prefixes;
    std::optional<std::size_t> first_failing_prefix; // against the recorded trace
};

/// Evaluates, for each prefix of the trace,
///   C(k+1) = (⊙_{i=1..k+1} St(i)) ⊙ C(0)
///          + Σ_{j=0..k} (⊙_{i=j+2..k+1} St(i)) ⊙ ((RSt(j+1) ⊙ Iv(j)) · M)
/// where St(i) is the status recorded at step i.
inline ClosedFormReport verify_delay_closed_form(const SnpSystem& sys, const Trace& trace) {
    const IntMatrix spiking = spiking_matrix(sys);
    const auto& recs = trace.records;
    for (std::size_t k = 0; k + 1 < recs.size(); ++k)
        if (!recs[k].iv)
            throw std::invalid_argument("trace record " + std::to_string(k) + " has no indicator vector");
    const std::size_t m = sys.neuron_count();
    ClosedFormReport report;
    IntVector v2 = recs.empty() ? IntVector{} : recs.front().config;
    for (std::size_t k = 0; k + 1 < recs.size(); ++k) {
        auto status_product = [&](std::size_t first, std::size_t last) {
            IntVector p(m, 1);
            for (std::size_t i = first; i <= last; ++i)
                p = hadamard(p, recs[i].st);
            return p;
        };
        IntVector value = hadamard(status_product(1, k + 1), recs.front().config);
        for (std::size_t j = 0; j <= k; ++j) {
            const IntVector masked = hadamard(rule_status(sys, recs[j + 1].st), *recs[j].iv);
            const IntVector term = row_times(masked, spiking);
            value = add(value, j + 2 <= k + 1 ? hadamard(status_product(j + 2, k + 1), term) : term);
        }
        v2 = step_with_delay_v2(v2, *recs[k].iv, recs[k + 1].st, spiking);
        ClosedFormPrefix p{k, value, recs[k + 1].config, v2};
        if (!p.matches_recorded() && !report.first_failing_prefix)
            report.first_failing_prefix = k;
        report.prefixes.push_back(std::move(p));
    }
    return report;
}

} // namespace snp

#endif // SNP_REACHABILITY_HPP
