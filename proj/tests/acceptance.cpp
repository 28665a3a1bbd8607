// Acceptance criteria: one PASS/FAIL line each, exact comparisons.
// Exits nonzero when any criterion fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"

using namespace snp_test;
using snp::DelayMode;
using snp::Policy;
using snp::detail::format_vector;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            notes.push_back(what);
        }
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

Outcome matrices() {
    Outcome o;
    const auto start = Clock::now();
    const SnpSystem one = example1();
    const SnpSystem three = example3();
    o.require(snp::spiking_matrix(one) == IntMatrix{{-1, 1, 1}, {-2, 1, 1}, {1, -1, 1}, {0, 0, -1}, {0, 0, -2}},
              "example 1 M");
    o.require(snp::augmented_matrix(one) ==
                  IntMatrix{{-1, 1, 1, 0}, {-2, 1, 1, 0}, {1, -1, 1, 0}, {0, 0, -1, 1}, {0, 0, -2, 0}},
              "example 1 M_hat");
    o.require(snp::struc_matrix(one) == IntMatrix{{-1, 1, 1}, {1, -1, 1}, {0, 0, -1}}, "example 1 Struc-M");
    o.require(snp::spiking_matrix(three) == IntMatrix{{-1, 1, 0}, {1, -1, 1}, {0, -2, 0}, {0, 1, -1}}, "example 3 M");
    o.require(snp::production_matrix(three) == IntMatrix{{0, 1, 0}, {1, 0, 1}, {0, 0, 0}, {0, 1, 0}}, "example 3 PM");
    o.require(snp::consumption_matrix(three) == IntMatrix{{1, 0, 0}, {0, 1, 0}, {0, 2, 0}, {0, 0, 1}},
              "example 3 CM");
    const double t = seconds_since(start);
    o.require(t < 0.1, "took " + std::to_string(t) + " s");
    return o;
}

Outcome pm_minus_cm() {
    Outcome o;
    for (const SnpSystem& sys : {example1(), example3()})
        o.require(snp::production_matrix(sys) - snp::consumption_matrix(sys) == snp::spiking_matrix(sys), "golden");
    std::mt19937_64 rng(9001);
    int bad = 0;
    for (int round = 0; round < 1000; ++round) {
        GenOptions opt;
        opt.max_neurons = 5;
        opt.max_rules = 8;
        opt.max_delay = round % 2 ? 3 : 0;
        const SnpSystem sys = random_system(rng, opt);
        bad += snp::production_matrix(sys) - snp::consumption_matrix(sys) == snp::spiking_matrix(sys) ? 0 : 1;
    }
    o.require(bad == 0, std::to_string(bad) + " of 1000 random systems differ");
    return o;
}

Outcome no_delay_stepping() {
    Outcome o;
    const auto start = Clock::now();
    const SnpSystem one = example1();
    const IntMatrix m = snp::spiking_matrix(one);
    const IntVector c1 = snp::step_no_delay({2, 1, 1}, {1, 0, 1, 1, 0}, m);
    const IntVector c2 = snp::step_no_delay(c1, {0, 1, 1, 0, 1}, m);
    o.require(c1 == IntVector{2, 1, 2}, "C(1) = " + format_vector(c1));
    o.require(c2 == IntVector{1, 1, 2}, "C(2) = " + format_vector(c2));

    std::mt19937_64 rng(9002);
    std::size_t compared = 0, mismatches = 0;
    for (int round = 0; round < 1000; ++round) {
        const SnpSystem sys = random_system(rng);
        const IntMatrix sm = snp::spiking_matrix(sys);
        snp::SimState s = snp::initial_state(sys);
        s.config = random_config(rng, sys.neuron_count(), 5);
        for (const auto& sp : snp::enumerate_spiking_vectors(sys, s.config, s.st)) {
            ++compared;
            if (snp::step_no_delay(s.config, sp, sm) != snp::operational_step(sys, s, sp, DelayMode::standard).config)
                ++mismatches;
        }
    }
    o.require(mismatches == 0, std::to_string(mismatches) + " of " + std::to_string(compared) + " steps differ");
    const double t = seconds_since(start);
    o.require(t < 10.0, "took " + std::to_string(t) + " s");
    return o;
}

Outcome delay_trace() {
    Outcome o;
    const SnpSystem sys = example3();
    const snp::Trace t = snp::run_trace(sys, 5, Policy::first, DelayMode::paper_trace);
    const std::vector<IntVector> c{{1, 0, 1}, {0, 1, 0}, {1, 0, 0}, {0, 1, 0}, {1, 0, 1}, {0, 1, 0}};
    const std::vector<IntVector> dst{{0, 0, 0, 0}, {0, 0, 0, 2}, {0, 0, 0, 1}, {0, 0, 0, 0}, {0, 0, 0, 2}};
    const std::vector<IntVector> st{{1, 1, 1}, {1, 1, 0}, {1, 1, 0}, {1, 1, 1}, {1, 1, 0}};
    // Step 4 uses the corrected Sp/Iv; the printed (0,1,0,0) contradicts DSt(4) and C(5).
    const std::vector<IntVector> sp{{1, 0, 0, 1}, {0, 1, 0, 0}, {1, 0, 0, 0}, {0, 1, 0, 0}, {1, 0, 0, 1}};
    const std::vector<IntVector> iv{{1, 0, 0, 0}, {0, 1, 0, 0}, {1, 0, 0, 0}, {0, 1, 0, 0}, {1, 0, 0, 0}};
    if (t.records.size() != 6) {
        o.require(false, "expected 6 records, got " + std::to_string(t.records.size()));
        return o;
    }
    for (std::size_t k = 0; k < 6; ++k)
        o.require(t.records[k].config == c[k], "C(" + std::to_string(k) + ") = " + format_vector(t.records[k].config));
    for (std::size_t k = 0; k < 5; ++k) {
        const auto& r = t.records[k];
        const std::string at = "(" + std::to_string(k) + ")";
        o.require(r.dst == dst[k], "DSt" + at + " = " + format_vector(r.dst));
        o.require(r.st == st[k], "St" + at + " = " + format_vector(r.st));
        o.require(r.sp && *r.sp == sp[k], "Sp" + at);
        o.require(r.iv && *r.iv == iv[k], "Iv" + at);
    }
    const snp::SystemMatrices mats(sys);
    o.require(snp::row_times(IntVector{1, 0, 0, 0}, mats.production) == IntVector{0, 1, 0}, "Gv(0)");
    o.require(snp::step_with_delay_v2({1, 0, 1}, {1, 0, 0, 0}, {1, 1, 0}, mats.spiking) == IntVector{0, 1, 0},
              "v2 C(1)");
    o.require(snp::step_with_delay_v2({1, 0, 0}, {1, 0, 0, 0}, {1, 1, 1}, mats.spiking) == IntVector{0, 1, 0},
              "v2 C(3)");
    return o;
}

Outcome reachability() {
    Outcome o;
    const auto start = Clock::now();
    const SnpSystem sys = example1();
    const auto a = snp::is_reachable(sys, {1, 1, 2}, 6);
    o.require(a.verdict == snp::Verdict::reachable && a.k == std::size_t{1}, "(1,1,2) minimal k");
    const auto b = snp::is_reachable(sys, {2, 1, 2}, 6);
    o.require(b.verdict == snp::Verdict::reachable && b.k == std::size_t{1}, "(2,1,2) minimal k");
    const auto two = snp::decompose_sum_vector(sys, {2, 1, 1}, {2, 0, 2, 1, 1});
    o.require(two.verdict == snp::Verdict::reachable &&
                  two.spiking_vectors == std::vector<IntVector>{{1, 0, 1, 1, 0}, {1, 0, 1, 0, 1}},
              "decomposition of (2,0,2,1,1)");
    const auto bad = snp::decompose_sum_vector(sys, {2, 1, 1}, {2, 0, 2, 3, 0});
    bool residual_seen = false;
    for (const auto& f : bad.candidates.front().failures)
        residual_seen = residual_seen || (f.residual == IntVector{0, 0, 0, 2, -1} &&
                                          f.reason == snp::reason::negative_residual);
    o.require(bad.verdict == snp::Verdict::not_reachable && residual_seen, "(2,0,2,3,0) residual (0,0,0,2,-1)");
    o.require(snp::is_reachable(sys, {2, 0, 2}, 6).verdict == snp::Verdict::not_reachable, "(2,0,2) with k_max=6");

    std::size_t disagreements = 0;
    const auto oracle = snp::bfs_reachable_set(sys, sys.initial_configuration(), 4);
    for (const auto& [config, k] : oracle) {
        const auto cert = snp::is_reachable(sys, config, 4);
        if (cert.verdict != snp::Verdict::reachable || cert.k != k)
            ++disagreements;
    }
    o.require(disagreements == 0, std::to_string(disagreements) + " of " + std::to_string(oracle.size()) +
                                      " oracle configurations disagree");
    const double t = seconds_since(start);
    o.require(t < 30.0, "took " + std::to_string(t) + " s");
    return o;
}

Outcome generated_set() {
    Outcome o;
    const auto tree = snp::explore_tree(example1(), 10, DelayMode::standard);
    std::set<std::int64_t> expected;
    for (std::int64_t i = 2; i <= 9; ++i)
        expected.insert(i);
    o.require(tree.first_intervals == expected, "first intervals differ from {2..9}");
    o.require(!tree.first_intervals.count(1), "interval 1 occurs");
    return o;
}

Outcome structure() {
    Outcome o;
    const auto rep = snp::structural_report(example1());
    o.require(rep.struc_rank == 2, "rank " + std::to_string(rep.struc_rank));
    o.require(rep.rank_cycle_hint, "rank hint");
    o.require(rep.dfs_has_cycle, "DFS cycle");
    return o;
}

Outcome properties() {
    Outcome o;
    std::mt19937_64 rng(9008);

    // Telescoping and nonnegativity along generated delay-free traces.
    std::size_t telescope_bad = 0, negative = 0;
    for (int round = 0; round < 500; ++round) {
        const SnpSystem sys = random_system(rng);
        const IntMatrix m = snp::spiking_matrix(sys);
        const snp::Trace t = snp::run_trace(sys, 12, Policy::seeded_random, DelayMode::standard, rng());
        IntVector total(sys.rule_count(), 0);
        for (const auto& r : t.records) {
            if (r.config != snp::add(t.records.front().config, snp::row_times(total, m)))
                ++telescope_bad;
            for (auto v : r.config)
                negative += v < 0 ? 1 : 0;
            if (r.sp)
                total = snp::add(total, *r.sp);
        }
    }
    o.require(telescope_bad == 0, std::to_string(telescope_bad) + " telescoping mismatches");

    // Nonnegativity also under delays, both modes.
    for (DelayMode mode : {DelayMode::standard, DelayMode::paper_trace})
        for (int round = 0; round < 300; ++round) {
            GenOptions opt;
            opt.max_delay = 3;
            const SnpSystem sys = random_system(rng, opt);
            for (const auto& r : snp::run_trace(sys, 12, Policy::seeded_random, mode, rng()).records)
                for (auto v : r.config)
                    negative += v < 0 ? 1 : 0;
        }
    o.require(negative == 0, std::to_string(negative) + " negative entries");

    // RSt identity: the worked step, then states drawn from delay traces.
    const SnpSystem three = example3();
    const auto worked = snp::rst_identity(three, {1, 1, 0}, {1, 0, 0, 0}, snp::spiking_matrix(three));
    o.require(worked.holds() && worked.lhs == IntVector{-1, 1, 0}, "worked example");

    std::size_t checked = 0, failed = 0;
    std::string first_counterexample;
    auto tally = [&](const SnpSystem& sys, const snp::Trace& t) {
        const IntMatrix m = snp::spiking_matrix(sys);
        for (const auto& r : t.records) {
            if (!r.iv)
                continue;
            ++checked;
            const auto id = snp::rst_identity(sys, r.st, *r.iv, m);
            if (!id.holds()) {
                ++failed;
                if (first_counterexample.empty())
                    first_counterexample = "St=" + format_vector(r.st) + " Iv=" + format_vector(*r.iv) + " gives " +
                                           format_vector(id.lhs) + " vs " + format_vector(id.rhs);
            }
        }
    };
    tally(three, snp::run_trace(three, 5, Policy::first, DelayMode::paper_trace));
    for (int round = 0; round < 300; ++round) {
        GenOptions opt;
        opt.max_delay = 3;
        const SnpSystem sys = random_system(rng, opt);
        tally(sys, snp::run_trace(sys, 10, Policy::seeded_random, round % 2 ? DelayMode::paper_trace : DelayMode::standard,
                                  rng()));
    }
    o.require(failed == 0, "RSt identity fails on " + std::to_string(failed) + " of " + std::to_string(checked) +
                               " recorded states; first: " + first_counterexample);
    return o;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 matrix reproduction", matrices},
        {"2 PM - CM = M", pm_minus_cm},
        {"3 delay-free stepping", no_delay_stepping},
        {"4 delay trace reproduction", delay_trace},
        {"5 reachability", reachability},
        {"6 generated set N - {1}", generated_set},
        {"7 structural analysis", structure},
        {"8 property suites", properties},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        std::ostringstream line;
        line << (o.pass ? "PASS" : "FAIL") << "  criterion " << name;
        for (std::size_t i = 0; i < o.notes.size(); ++i)
            line << (i ? "; " : "  -- ") << o.notes[i];
        std::cout << line.str() << '\n';
        failures += o.pass ? 0 : 1;
    }
    std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criterion(s) fail") << '\n';
    return failures == 0 ? 0 : 1;
}
