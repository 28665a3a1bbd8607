#ifndef SNP_ENGINE_HPP
#define SNP_ENGINE_HPP

// Computation of SN P systems: spiking-vector enumeration, the matrix step
// formulas, delay bookkeeping, an operational oracle written without matrices,
// and trace recording.
//
// Delay modes
// -----------
// standard:    a rule fired at t with delay d consumes at t; its neuron is
//              closed during steps t+1..t+d and the production is delivered at
//              step t+d to targets that are open then.
// paper_trace: the bookkeeping of the classic 3-neuron worked trace. Delays
//              apply in the firing step itself, except at k = 0 where every
//              neuron is open and the countdown starts at k = 1. Delayed rules
//              never set their indicator bit, so their production is dropped.
//
// In both modes DSt(k)_i is the number of closed steps left for rule i
// counting step k, and a neuron is closed iff one of its rules has DSt > 0.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "snp/int_matrix.hpp"
#include "snp/matrices.hpp"
#include "snp/system.hpp"

namespace snp {

enum class DelayMode { standard, paper_trace };

inline const char* to_string(DelayMode mode) { return mode == DelayMode::standard ? "standard" : "paper-trace"; }

/// A step formula produced a negative spike count. This is a bug in the
/// caller's spiking vector or in the engine, never a user error.
class SemanticsViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

namespace detail {

inline std::string format_vector(const IntVector& v) {
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            out += ',';
        out += std::to_string(v[i]);
    }
    return out + ")";
}

inline void require_nonnegative(const IntVector& c, const std::string& context) {
    for (auto v : c)
        if (v < 0)
            throw SemanticsViolation("negative configuration " + format_vector(c) + " after " + context);
}

} // namespace detail

struct PendingEmission {
    std::int64_t remaining = 0;
    std::int64_t spikes = 0;

    friend bool operator==(const PendingEmission&, const PendingEmission&) = default;
};

struct SimState {
    std::size_t k = 0;
    IntVector config;
    IntVector dst; // per rule, before any firing at step k
    IntVector st;  // per neuron, derived from dst
    std::vector<std::optional<PendingEmission>> pending; // operational oracle only
    std::int64_t emitted = 0; // environment spikes of the step that led here (oracle only)
};

inline IntVector status_from_delays(const SnpSystem& sys, const IntVector& dst) {
    IntVector st(sys.neuron_count(), 1);
    for (std::size_t i = 0; i < sys.rule_count(); ++i)
        if (dst.at(i) > 0)
            st[sys.rules[i].owner] = 0;
    return st;
}

/// RSt_i = St_owner(i).
inline IntVector rule_status(const SnpSystem& sys, const IntVector& st) {
    IntVector rst(sys.rule_count());
    for (std::size_t i = 0; i < sys.rule_count(); ++i)
        rst[i] = st.at(sys.rules[i].owner);
    return rst;
}

inline SimState initial_state(const SnpSystem& sys) {
    SimState s;
    s.config = sys.initial_configuration();
    s.dst.assign(sys.rule_count(), 0);
    s.st.assign(sys.neuron_count(), 1);
    s.pending.assign(sys.rule_count(), std::nullopt);
    return s;
}

/// Applicable rule indices per neuron; closed neurons get none.
inline std::vector<std::vector<std::size_t>> applicable_rules(const SnpSystem& sys, const IntVector& config,
                                                              const IntVector& st) {
    if (config.size() != sys.neuron_count() || st.size() != sys.neuron_count())
        throw std::invalid_argument("configuration/status length must equal the neuron count");
    std::vector<std::vector<std::size_t>> out(sys.neuron_count());
    for (std::size_t i = 0; i < sys.rule_count(); ++i) {
        const Rule& r = sys.rules[i];
        if (st[r.owner] != 0 && r.applicable(config[r.owner]))
            out[r.owner].push_back(i);
    }
    return out;
}

/// All valid spiking vectors: one applicable rule per open neuron that has
/// any. Ordered lexicographically by the chosen rule indices, so the first
/// vector picks the lowest index in every neuron. Empty when nothing applies.
inline std::vector<IntVector> enumerate_spiking_vectors(const SnpSystem& sys, const IntVector& config,
                                                        const IntVector& st) {
    const auto choices = applicable_rules(sys, config, st);
    std::vector<std::size_t> firing;
    for (std::size_t j = 0; j < choices.size(); ++j)
        if (!choices[j].empty())
            firing.push_back(j);
    std::vector<IntVector> out;
    if (firing.empty())
        return out;
    std::vector<std::size_t> pick(firing.size(), 0);
    while (true) {
        IntVector sp(sys.rule_count(), 0);
        for (std::size_t f = 0; f < firing.size(); ++f)
            sp[choices[firing[f]][pick[f]]] = 1;
        out.push_back(std::move(sp));
        std::size_t f = firing.size();
        while (f > 0) {
            --f;
            if (++pick[f] < choices[firing[f]].size())
                break;
            pick[f] = 0;
            if (f == 0)
                return out;
        }
    }
}

inline bool is_valid_spiking_vector(const SnpSystem& sys, const IntVector& config, const IntVector& st,
                                    const IntVector& sp) {
    if (sp.size() != sys.rule_count())
        return false;
    const auto choices = applicable_rules(sys, config, st);
    std::vector<int> chosen(sys.neuron_count(), 0);
    bool any_applicable = false;
    for (std::size_t i = 0; i < sp.size(); ++i) {
        if (sp[i] != 0 && sp[i] != 1)
            return false;
        if (sp[i] == 0)
            continue;
        const std::size_t owner = sys.rules[i].owner;
        const auto& ok = choices[owner];
        if (std::find(ok.begin(), ok.end(), i) == ok.end())
            return false;
        ++chosen[owner];
    }
    for (std::size_t j = 0; j < sys.neuron_count(); ++j) {
        const bool has = !choices[j].empty();
        any_applicable = any_applicable || has;
        if (chosen[j] != (has ? 1 : 0))
            return false;
    }
    return any_applicable;
}

/// NG = Sp · M.
inline IntVector net_gain(const IntVector& sp, const IntMatrix& spiking) { return row_times(sp, spiking); }

/// C' = C + Sp · M.
inline IntVector step_no_delay(const IntVector& config, const IntVector& sp, const IntMatrix& spiking) {
    if (config.size() != spiking.cols())
        throw std::invalid_argument("configuration length does not match the spiking matrix");
    IntVector next = add(config, net_gain(sp, spiking));
    detail::require_nonnegative(next, "C + Sp*M with C=" + detail::format_vector(config) +
                                          " Sp=" + detail::format_vector(sp));
    return next;
}

/// C' = C + St ⊙ (Iv · PM) - Sp · CM.
inline IntVector step_with_delay_v1(const IntVector& config, const IntVector& sp, const IntVector& iv,
                                    const IntVector& st, const IntMatrix& production, const IntMatrix& consumption) {
    if (config.size() != production.cols() || st.size() != production.cols() ||
        production.rows() != consumption.rows() || production.cols() != consumption.cols())
        throw std::invalid_argument("step_with_delay_v1: dimension mismatch");
    const IntVector gain = row_times(iv, production);
    const IntVector loss = row_times(sp, consumption);
    IntVector next = subtract(add(config, hadamard(st, gain)), loss);
    detail::require_nonnegative(next, "C + St*(Iv*PM) - Sp*CM with C=" + detail::format_vector(config) +
                                          " Sp=" + detail::format_vector(sp) + " Iv=" +
                                          detail::format_vector(iv) + " St=" + detail::format_vector(st));
    return next;
}

/// C' = St' ⊙ (C + Iv · M), St' being the status at the next step.
inline IntVector step_with_delay_v2(const IntVector& config, const IntVector& iv, const IntVector& st_next,
                                    const IntMatrix& spiking) {
    if (config.size() != spiking.cols() || st_next.size() != spiking.cols())
        throw std::invalid_argument("step_with_delay_v2: dimension mismatch");
    return hadamard(st_next, add(config, row_times(iv, spiking)));
}

/// Effective delay status, neuron status and indicator for step k once the
/// step's spiking vector is known.
struct StepStatus {
    IntVector dst;
    IntVector st;
    IntVector iv;
};

inline StepStatus step_status(const SnpSystem& sys, const SimState& state, const IntVector& sp, DelayMode mode) {
    if (sp.size() != sys.rule_count())
        throw std::invalid_argument("spiking vector length must equal the rule count");
    StepStatus out;
    out.dst = state.dst;
    if (mode == DelayMode::paper_trace && state.k >= 1)
        for (std::size_t i = 0; i < sp.size(); ++i)
            if (sp[i] && sys.rules[i].delay > 0)
                out.dst[i] = sys.rules[i].delay;
    out.st = status_from_delays(sys, out.dst);
    out.iv.assign(sys.rule_count(), 0);
    for (std::size_t i = 0; i < sp.size(); ++i) {
        const bool fires_now = sp[i] && sys.rules[i].delay == 0;
        const bool expires_now = mode == DelayMode::standard && state.dst[i] == 1;
        out.iv[i] = (fires_now || expires_now) ? 1 : 0;
    }
    return out;
}

/// Delay bookkeeping for step k+1. The configuration is carried unchanged;
/// the step formulas compute the next one.
inline SimState update_delay_state(const SnpSystem& sys, const SimState& state, const IntVector& sp,
                                   DelayMode mode) {
    const StepStatus now = step_status(sys, state, sp, mode);
    SimState next = state;
    next.k = state.k + 1;
    for (std::size_t i = 0; i < sys.rule_count(); ++i) {
        const bool fired_delayed = sp[i] && sys.rules[i].delay > 0;
        const bool starts_next = mode == DelayMode::standard || state.k == 0;
        if (fired_delayed && starts_next)
            next.dst[i] = sys.rules[i].delay;
        else
            next.dst[i] = std::max<std::int64_t>(now.dst[i] - 1, 0);
    }
    next.st = status_from_delays(sys, next.dst);
    return next;
}

/// Reference semantics without matrices: each fired rule takes its spikes
/// from its own neuron and sends spikes along each outgoing synapse; a closed
/// neuron drops whatever is sent to it.
inline SimState operational_step(const SnpSystem& sys, const SimState& state, const IntVector& sp, DelayMode mode) {
    const std::size_t m = sys.neuron_count();
    const std::size_t n = sys.rule_count();
    if (sp.size() != n || state.config.size() != m)
        throw std::invalid_argument("operational_step: dimension mismatch");
    std::vector<std::optional<PendingEmission>> pending = state.pending;
    pending.resize(n);

    std::vector<bool> closed(m, false);
    for (std::size_t i = 0; i < n; ++i)
        if (pending[i] && pending[i]->remaining > 0)
            closed[sys.rules[i].owner] = true;
    if (mode == DelayMode::paper_trace && state.k >= 1)
        for (std::size_t i = 0; i < n; ++i)
            if (sp[i] && sys.rules[i].delay > 0)
                closed[sys.rules[i].owner] = true;

    SimState next;
    next.k = state.k + 1;
    next.config = state.config;
    next.emitted = 0;

    auto send = [&](std::size_t from, std::int64_t spikes) {
        for (const auto& [src, dst] : sys.synapses)
            if (src == from && !closed[dst])
                next.config[dst] += spikes;
        if (sys.output && *sys.output == from)
            next.emitted += spikes;
    };

    // Deliveries of earlier delayed firings.
    for (std::size_t i = 0; i < n; ++i) {
        if (!pending[i])
            continue;
        if (pending[i]->remaining == 1 && mode == DelayMode::standard)
            send(sys.rules[i].owner, pending[i]->spikes);
        if (--pending[i]->remaining <= 0)
            pending[i].reset();
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (!sp[i])
            continue;
        const Rule& r = sys.rules[i];
        next.config[r.owner] -= r.consume;
        if (r.delay == 0) {
            if (!r.is_forgetting())
                send(r.owner, r.produce);
            continue;
        }
        const std::int64_t remaining = (mode == DelayMode::paper_trace && state.k >= 1) ? r.delay - 1 : r.delay;
        if (remaining > 0)
            pending[i] = PendingEmission{remaining, r.is_forgetting() ? 0 : r.produce};
    }
    detail::require_nonnegative(next.config, "operational step " + std::to_string(state.k));

    next.pending = std::move(pending);
    next.dst.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        if (next.pending[i])
            next.dst[i] = next.pending[i]->remaining;
    next.st = status_from_delays(sys, next.dst);
    return next;
}

// ---------------------------------------------------------------------------
// Traces

struct TraceRecord {
    std::size_t k = 0;
    IntVector config;
    IntVector st;  // effective status for the step (carried status on terminal records)
    IntVector dst;
    std::optional<IntVector> sp; // absent on a terminal record
    std::optional<IntVector> iv;
    std::optional<IntVector> ng;
    std::optional<std::int64_t> emitted;
};

struct Trace {
    DelayMode mode = DelayMode::standard;
    std::vector<TraceRecord> records;
    bool halted = false;
    std::string spike_train; // one character per executed step: '1' if the output neuron emitted
    std::optional<std::int64_t> first_interval;
};

enum class Policy { first, seeded_random };

struct Transition {
    TraceRecord record;
    SimState next;
};

/// One step under the default formula: the delay-free formula for systems
/// without delays, the production/consumption formula otherwise.
inline Transition take_step(const SnpSystem& sys, const SystemMatrices& mats, const SimState& state,
                            const IntVector& sp, DelayMode mode) {
    const StepStatus status = step_status(sys, state, sp, mode);
    IntVector next_config = sys.has_delays()
                                ? step_with_delay_v1(state.config, sp, status.iv, status.st, mats.production,
                                                     mats.consumption)
                                : step_no_delay(state.config, sp, mats.spiking);
    std::int64_t emitted = 0;
    for (std::size_t i = 0; i < status.iv.size(); ++i)
        emitted += status.iv[i] * mats.environment[i];

    Transition t;
    t.record.k = state.k;
    t.record.config = state.config;
    t.record.st = status.st;
    t.record.dst = status.dst;
    t.record.sp = sp;
    t.record.iv = status.iv;
    t.record.ng = subtract(next_config, state.config);
    t.record.emitted = emitted;
    t.next = update_delay_state(sys, state, sp, mode);
    t.next.config = std::move(next_config);
    return t;
}

inline TraceRecord terminal_record(const SimState& state) {
    TraceRecord r;
    r.k = state.k;
    r.config = state.config;
    r.st = state.st;
    r.dst = state.dst;
    return r;
}

inline bool all_open(const IntVector& st) {
    return std::all_of(st.begin(), st.end(), [](std::int64_t v) { return v != 0; });
}

inline Trace run_trace(const SnpSystem& sys, std::size_t steps, Policy policy, DelayMode mode,
                       std::uint64_t seed = 0) {
    const SystemMatrices mats(sys);
    std::mt19937_64 rng(seed);
    Trace trace;
    trace.mode = mode;
    SimState state = initial_state(sys);
    std::vector<std::size_t> emission_steps;
    for (std::size_t s = 0; s < steps; ++s) {
        const auto options = enumerate_spiking_vectors(sys, state.config, state.st);
        IntVector sp;
        if (options.empty()) {
            if (all_open(state.st)) {
                trace.halted = true;
                break;
            }
            sp.assign(sys.rule_count(), 0);
        } else if (policy == Policy::first) {
            sp = options.front();
        } else {
            sp = options[static_cast<std::size_t>(rng() % options.size())];
        }
        Transition t = take_step(sys, mats, state, sp, mode);
        const bool spiked = *t.record.emitted > 0;
        trace.spike_train += spiked ? '1' : '0';
        if (spiked)
            emission_steps.push_back(t.record.k);
        trace.records.push_back(std::move(t.record));
        state = std::move(t.next);
    }
    trace.records.push_back(terminal_record(state));
    if (emission_steps.size() >= 2)
        trace.first_interval = static_cast<std::int64_t>(emission_steps[1] - emission_steps[0]);
    return trace;
}

/// Bounded computation tree. Each node is one trace record; following parent
/// links from any node back to a root spells out a linear trace.
struct TraceTreeNode {
    std::optional<std::size_t> parent;
    TraceRecord record;
    bool halted = false; // terminal record of a halting configuration
};

struct TraceTree {
    DelayMode mode = DelayMode::standard;
    std::vector<TraceTreeNode> nodes;
    std::set<std::int64_t> first_intervals;
    std::size_t halted_leaves = 0;
    std::size_t horizon_leaves = 0;
};

inline TraceTree explore_tree(const SnpSystem& sys, std::size_t depth, DelayMode mode,
                              std::size_t max_nodes = std::size_t{1} << 20) {
    const SystemMatrices mats(sys);
    TraceTree tree;
    tree.mode = mode;
    std::vector<std::size_t> emissions;

    auto add_node = [&](std::optional<std::size_t> parent, TraceRecord rec, bool halted) {
        if (tree.nodes.size() >= max_nodes)
            throw std::length_error("computation tree exceeds " + std::to_string(max_nodes) + " nodes");
        tree.nodes.push_back({parent, std::move(rec), halted});
        return tree.nodes.size() - 1;
    };

    std::function<void(const SimState&, std::optional<std::size_t>)> visit =
        [&](const SimState& state, std::optional<std::size_t> parent) {
            if (state.k >= depth) {
                add_node(parent, terminal_record(state), false);
                ++tree.horizon_leaves;
                return;
            }
            auto options = enumerate_spiking_vectors(sys, state.config, state.st);
            if (options.empty()) {
                if (all_open(state.st)) {
                    add_node(parent, terminal_record(state), true);
                    ++tree.halted_leaves;
                    return;
                }
                options.push_back(IntVector(sys.rule_count(), 0));
            }
            for (const auto& sp : options) {
                Transition t = take_step(sys, mats, state, sp, mode);
                const bool spiked = *t.record.emitted > 0;
                if (spiked) {
                    emissions.push_back(state.k);
                    if (emissions.size() == 2)
                        tree.first_intervals.insert(static_cast<std::int64_t>(emissions[1] - emissions[0]));
                }
                const std::size_t id = add_node(parent, std::move(t.record), false);
                visit(t.next, id);
                if (spiked)
                    emissions.pop_back();
            }
        };
    visit(initial_state(sys), std::nullopt);
    return tree;
}

// ---------------------------------------------------------------------------
// Formula cross-checks

struct RstIdentity {
    IntVector lhs; // St ⊙ (Iv · M)
    IntVector rhs; // (RSt ⊙ Iv) · M
    bool holds() const { return lhs == rhs; }
};

inline RstIdentity rst_identity(const SnpSystem& sys, const IntVector& st, const IntVector& iv,
                                const IntMatrix& spiking) {
    return {hadamard(st, row_times(iv, spiking)), row_times(hadamard(rule_status(sys, st), iv), spiking)};
}

struct StepIdentityCheck {
    std::size_t k = 0;
    RstIdentity rst;
    IntVector recorded;          // C(k+1) from the trace
    std::optional<IntVector> v1; // nullopt: the formula hit a negative entry
    IntVector v2;
    IntVector oracle;
    bool v1_matches() const { return v1 && *v1 == recorded; }
    bool v2_matches() const { return v2 == recorded; }
    bool oracle_matches() const { return oracle == recorded; }
};

/// Per-step comparison of both delay formulas and the operational oracle
/// against a recorded linear trace. Disagreements are data, not failures.
inline std::vector<StepIdentityCheck> check_step_identities(const SnpSystem& sys, const Trace& trace) {
    const SystemMatrices mats(sys);
    std::vector<StepIdentityCheck> out;
    SimState oracle = initial_state(sys);
    for (std::size_t k = 0; k + 1 < trace.records.size(); ++k) {
        const TraceRecord& rec = trace.records[k];
        const TraceRecord& after = trace.records[k + 1];
        if (!rec.sp || !rec.iv)
            break;
        StepIdentityCheck c;
        c.k = rec.k;
        c.rst = rst_identity(sys, rec.st, *rec.iv, mats.spiking);
        c.recorded = after.config;
        try {
            c.v1 = step_with_delay_v1(rec.config, *rec.sp, *rec.iv, rec.st, mats.production, mats.consumption);
        } catch (const SemanticsViolation&) {
            c.v1.reset();
        }
        c.v2 = step_with_delay_v2(rec.config, *rec.iv, after.st, mats.spiking);
        oracle = operational_step(sys, oracle, *rec.sp, trace.mode);
        c.oracle = oracle.config;
        out.push_back(std::move(c));
    }
    return out;
}

} // namespace snp

#endif // SNP_ENGINE_HPP
