#ifndef SNP_CLI_HPP
#define SNP_CLI_HPP

// Command-line front end. run_cli is the whole program minus main(), so tests
// can drive it in-process.
//
// Exit codes: 0 success or reachable, 1 validation failure or unreachable,
// 2 usage, input or parse error.

#include <CLI11.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "snp/engine.hpp"
#include "snp/json_io.hpp"
#include "snp/matrices.hpp"
#include "snp/reachability.hpp"
#include "snp/system.hpp"

namespace snp {

namespace cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_negative = 1;
inline constexpr int exit_usage = 2;

enum class Format { text, json };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string vec(const IntVector& v) { return detail::format_vector(v); }

inline std::string opt_vec(const std::optional<IntVector>& v) { return v ? vec(*v) : "-"; }

inline void print_matrix(std::ostream& out, const std::string& title, const IntMatrix& mat) {
    out << title << " (" << mat.rows() << " x " << mat.cols() << ")\n";
    std::size_t width = 1;
    for (auto v : mat.data())
        width = std::max(width, std::to_string(v).size());
    for (std::size_t r = 0; r < mat.rows(); ++r) {
        out << " ";
        for (std::size_t c = 0; c < mat.cols(); ++c)
            out << ' ' << std::setw(static_cast<int>(width)) << mat(r, c);
        out << '\n';
    }
}

/// "2,0,2" -> {2,0,2}; entries must be nonnegative integers.
inline IntVector parse_config(const std::string& text, const std::string& flag) {
    IntVector out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        long long v = -1;
        try {
            v = std::stoll(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size() || v < 0)
            throw UsageError(flag + " expects comma-separated nonnegative integers, got '" + text + "'");
        out.push_back(v);
    }
    if (out.empty())
        throw UsageError(flag + " must not be empty");
    return out;
}

inline SnpSystem load_system(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw UsageError("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_system(buf.str());
}

inline void print_issues(std::ostream& out, const std::string& path, const ValidationReport& report) {
    for (const auto& i : report.issues)
        out << path << ": " << (i.severity == Severity::error ? "error" : "warning") << " [" << i.code << "] "
            << i.location << ": " << i.message << '\n';
}

/// Loaded system or an exit code (invalid systems are refused by every command but validate).
struct Loaded {
    SnpSystem sys;
    ValidationReport report;
};

inline void print_record_text(std::ostream& out, const TraceRecord& r) {
    out << "k=" << r.k << " C=" << vec(r.config) << " St=" << vec(r.st) << " DSt=" << vec(r.dst);
    if (r.sp)
        out << " Sp=" << vec(*r.sp) << " Iv=" << opt_vec(r.iv) << " NG=" << opt_vec(r.ng)
            << " emitted=" << r.emitted.value_or(0);
    out << '\n';
}

struct Options {
    std::string path;
    std::string format = "text";
    std::string mode = "standard";
    std::string policy = "first";
    std::optional<std::uint64_t> seed;
    std::size_t steps = 10;
    std::size_t k_max = 5;
    std::optional<std::size_t> v_max;
    std::string target;
    std::string from;
    bool report = false;
};

inline int cmd_validate(const Options& o, Format fmt, std::ostream& out, std::ostream& err) {
    const SnpSystem sys = load_system(o.path);
    const ValidationReport report = validate(sys);
    if (fmt == Format::json) {
        out << to_json(report).dump() << '\n';
    } else {
        print_issues(err, o.path, report);
        out << (report.ok() ? "valid" : "invalid") << ": " << sys.neuron_count() << " neurons, " << sys.rule_count()
            << " rules, " << sys.synapses.size() << " synapses\n";
    }
    return report.ok() ? exit_ok : exit_negative;
}

inline int cmd_matrices(const SnpSystem& sys, Format fmt, std::ostream& out) {
    const IntMatrix m = spiking_matrix(sys);
    const std::optional<IntMatrix> m_hat = sys.output ? std::optional<IntMatrix>(augmented_matrix(sys)) : std::nullopt;
    const IntMatrix pm = production_matrix(sys);
    const IntMatrix cm = consumption_matrix(sys);
    const IntMatrix sm = struc_matrix(sys);
    if (fmt == Format::json) {
        Json j{{"M", to_json(m)},
               {"M_hat", m_hat ? to_json(*m_hat) : Json(nullptr)},
               {"PM", to_json(pm)},
               {"CM", to_json(cm)},
               {"Struc_M", to_json(sm)}};
        out << j.dump() << '\n';
        return exit_ok;
    }
    print_matrix(out, "M", m);
    if (m_hat)
        print_matrix(out, "M_hat", *m_hat);
    else
        out << "M_hat: no output neuron\n";
    print_matrix(out, "PM", pm);
    print_matrix(out, "CM", cm);
    print_matrix(out, "Struc_M", sm);
    return exit_ok;
}

inline int cmd_simulate(const SnpSystem& sys, const Options& o, Format fmt, std::ostream& out) {
    const DelayMode mode = o.mode == "paper-trace" ? DelayMode::paper_trace : DelayMode::standard;
    if (o.policy == "exhaustive") {
        const TraceTree tree = explore_tree(sys, o.steps, mode);
        if (fmt == Format::json) {
            for (std::size_t id = 0; id < tree.nodes.size(); ++id) {
                Json line{{"node", id}, {"parent", optional_json(tree.nodes[id].parent)}};
                line.update(to_json(tree.nodes[id].record));
                line["halted"] = tree.nodes[id].halted;
                out << line.dump() << '\n';
            }
            Json summary{{"mode", to_string(mode)},
                         {"policy", "exhaustive"},
                         {"depth", o.steps},
                         {"nodes", tree.nodes.size()},
                         {"halted_leaves", tree.halted_leaves},
                         {"horizon_leaves", tree.horizon_leaves},
                         {"first_intervals", tree.first_intervals}};
            out << Json{{"summary", std::move(summary)}}.dump() << '\n';
            return exit_ok;
        }
        for (std::size_t id = 0; id < tree.nodes.size(); ++id) {
            const auto& node = tree.nodes[id];
            out << "node=" << id << " parent=" << (node.parent ? std::to_string(*node.parent) : "-")
                << (node.halted ? " halted " : " ");
            print_record_text(out, node.record);
        }
        out << "nodes=" << tree.nodes.size() << " halted_leaves=" << tree.halted_leaves
            << " horizon_leaves=" << tree.horizon_leaves << " first_intervals={";
        bool first = true;
        for (auto v : tree.first_intervals) {
            out << (first ? "" : ",") << v;
            first = false;
        }
        out << "}\n";
        return exit_ok;
    }

    const Policy policy = o.policy == "random" ? Policy::seeded_random : Policy::first;
    const Trace trace = run_trace(sys, o.steps, policy, mode, o.seed.value_or(0));
    std::optional<std::vector<StepIdentityCheck>> checks;
    std::optional<ClosedFormReport> closed;
    if (o.report) {
        checks = check_step_identities(sys, trace);
        closed = verify_delay_closed_form(sys, trace);
    }
    if (fmt == Format::json) {
        for (const auto& r : trace.records)
            out << to_json(r).dump() << '\n';
        Json summary{{"mode", to_string(mode)},
                     {"policy", o.policy},
                     {"seed", optional_json(o.seed)},
                     {"steps", trace.records.size() - 1},
                     {"halted", trace.halted},
                     {"spike_train", trace.spike_train},
                     {"first_interval", optional_json(trace.first_interval)}};
        if (checks) {
            Json arr = Json::array();
            for (const auto& c : *checks)
                arr.push_back(to_json(c));
            summary["identities"] = std::move(arr);
            summary["closed_form"] = to_json(*closed);
        }
        out << Json{{"summary", std::move(summary)}}.dump() << '\n';
        return exit_ok;
    }
    for (const auto& r : trace.records)
        print_record_text(out, r);
    out << "mode=" << to_string(mode) << " halted=" << (trace.halted ? "yes" : "no")
        << " spike_train=" << (trace.spike_train.empty() ? "-" : trace.spike_train) << " first_interval="
        << (trace.first_interval ? std::to_string(*trace.first_interval) : "-") << '\n';
    if (checks) {
        for (const auto& c : *checks)
            out << "check k=" << c.k << " recorded=" << vec(c.recorded) << " v1=" << opt_vec(c.v1)
                << " v2=" << vec(c.v2) << " oracle=" << vec(c.oracle) << " rst=" << vec(c.rst.lhs)
                << (c.rst.holds() ? "==" : "!=") << vec(c.rst.rhs) << '\n';
        for (const auto& p : closed->prefixes)
            out << "closed-form k=" << p.k << " value=" << vec(p.closed_form) << " recorded=" << vec(p.recorded)
                << " v2=" << vec(p.v2_iterate) << '\n';
    }
    return exit_ok;
}

inline int cmd_analyze(const SnpSystem& sys, Format fmt, std::ostream& out) {
    const StructuralReport rep = structural_report(sys);
    if (fmt == Format::json) {
        out << to_json(rep).dump() << '\n';
        return exit_ok;
    }
    auto list = [](const auto& v) {
        std::string s = "(";
        for (std::size_t i = 0; i < v.size(); ++i)
            s += (i ? "," : "") + std::to_string(v[i]);
        return s + ")";
    };
    std::vector<std::size_t> inferred;
    for (auto j : rep.inferred_output_neurons)
        inferred.push_back(j + 1);
    out << "row negatives: " << list(rep.row_negative_counts) << '\n'
        << "column negatives: " << list(rep.column_negative_counts) << '\n'
        << "unique negative per row: " << (rep.rows_have_unique_negative ? "yes" : "no") << '\n'
        << "every ruled neuron has a negative: " << (rep.rule_columns_have_negative ? "yes" : "no") << '\n'
        << "candidate output neurons (1-based): " << list(inferred) << '\n'
        << "out-degree: " << list(rep.out_degree) << '\n'
        << "rank(Struc_M): " << rep.struc_rank << " of " << sys.neuron_count() << '\n'
        << "rank suggests a cycle: " << (rep.rank_cycle_hint ? "yes" : "no") << '\n'
        << "DFS finds a cycle: " << (rep.dfs_has_cycle ? "yes" : "no") << '\n';
    return exit_ok;
}

inline int cmd_reach(const SnpSystem& sys, const Options& o, Format fmt, std::ostream& out) {
    if (o.target.empty())
        throw UsageError("reach requires --target");
    if (sys.has_delays())
        throw UsageError("reach supports only systems without delays");
    const IntVector target = parse_config(o.target, "--target");
    if (target.size() != sys.neuron_count())
        throw UsageError("--target has " + std::to_string(target.size()) + " entries, system has " +
                         std::to_string(sys.neuron_count()) + " neurons");
    ReachabilityCertificate cert;
    if (!o.from.empty()) {
        const IntVector from = parse_config(o.from, "--from");
        if (from.size() != sys.neuron_count())
            throw UsageError("--from has " + std::to_string(from.size()) + " entries, system has " +
                             std::to_string(sys.neuron_count()) + " neurons");
        cert = reach_between(sys, from, target, o.v_max.value_or(o.k_max));
    } else {
        cert = is_reachable(sys, target, o.k_max);
    }
    if (fmt == Format::json) {
        out << to_json(cert).dump() << '\n';
    } else {
        out << "verdict: " << to_string(cert.verdict) << '\n';
        if (cert.k) {
            out << "k: " << *cert.k << "\nsum vector: " << opt_vec(cert.sum_vector) << '\n';
            for (std::size_t i = 0; i < cert.configurations.size(); ++i) {
                out << "C(" << i << ")=" << vec(cert.configurations[i]);
                if (i < cert.spiking_vectors.size())
                    out << " Sp(" << i << ")=" << vec(cert.spiking_vectors[i]);
                out << '\n';
            }
        }
        if (!cert.message.empty())
            out << cert.message << '\n';
        out << "candidates: " << cert.candidates.size() << '\n';
        for (const auto& c : cert.candidates) {
            out << "  s=" << vec(c.sum_vector) << (c.k ? " k=" + std::to_string(*c.k) : std::string(" failed"))
                << '\n';
            for (const auto& f : c.failures)
                out << "    i=" << f.i << " residual=" << vec(f.residual) << " Sp=" << opt_vec(f.sp)
                    << " C=" << vec(f.config) << " (" << f.reason << ")\n";
        }
    }
    return cert.verdict == Verdict::reachable ? exit_ok : exit_negative;
}

} // namespace cli

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    using namespace cli;
    CLI::App app{"Spiking neural P system toolkit: matrices, simulation and reachability", "snp"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("file", o.path, "system description")->required();
        sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "json"}));
    };
    auto* validate_cmd = app.add_subcommand("validate", "check a system description");
    add_common(validate_cmd);
    auto* matrices_cmd = app.add_subcommand("matrices", "print M, M_hat, PM, CM and Struc_M");
    add_common(matrices_cmd);
    auto* simulate_cmd = app.add_subcommand("simulate", "run a computation");
    add_common(simulate_cmd);
    simulate_cmd->add_option("--steps", o.steps, "number of steps (tree depth for exhaustive)");
    simulate_cmd->add_option("--policy", o.policy, "choice among valid spiking vectors")
        ->check(CLI::IsMember({"first", "random", "exhaustive"}));
    simulate_cmd->add_option("--seed", o.seed, "seed for --policy random");
    simulate_cmd->add_option("--mode", o.mode, "delay semantics")
        ->check(CLI::IsMember({"standard", "paper-trace"}));
    simulate_cmd->add_flag("--report", o.report, "append formula cross-checks");
    auto* analyze_cmd = app.add_subcommand("analyze", "structural reading of the matrices");
    add_common(analyze_cmd);
    auto* reach_cmd = app.add_subcommand("reach", "decide k-reachability of a configuration");
    add_common(reach_cmd);
    reach_cmd->add_option("--target", o.target, "target configuration, e.g. 2,0,2")->required();
    reach_cmd->add_option("--kmax", o.k_max, "step bound from the initial configuration");
    reach_cmd->add_option("--from", o.from, "origin configuration instead of the initial one");
    reach_cmd->add_option("--vmax", o.v_max, "step bound from --from (defaults to --kmax)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    const Format fmt = o.format == "json" ? Format::json : Format::text;
    try {
        if (simulate_cmd->parsed()) {
            if (o.policy == "random" && !o.seed)
                throw UsageError("--policy random requires --seed");
            if (o.policy != "random" && o.seed)
                throw UsageError("--seed is only meaningful with --policy random");
        }
        if (validate_cmd->parsed())
            return cmd_validate(o, fmt, out, err);

        const SnpSystem sys = load_system(o.path);
        const ValidationReport report = validate(sys);
        print_issues(err, o.path, report);
        if (!report.ok())
            return exit_negative;
        if (matrices_cmd->parsed())
            return cmd_matrices(sys, fmt, out);
        if (simulate_cmd->parsed())
            return cmd_simulate(sys, o, fmt, out);
        if (analyze_cmd->parsed())
            return cmd_analyze(sys, fmt, out);
        return cmd_reach(sys, o, fmt, out);
    } catch (const ParseError& e) {
        err << o.path << ": " << e.what() << '\n';
        return exit_usage;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::length_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
}

} // namespace snp

#endif // SNP_CLI_HPP
