#ifndef SNP_MATRICES_HPP
#define SNP_MATRICES_HPP

// Matrix forms of an SN P system and the structural reading of them.
//
// Rows are rules in system order, columns are neurons in declaration order.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "snp/int_matrix.hpp"
#include "snp/linalg.hpp"
#include "snp/system.hpp"

namespace snp {

/// Spiking transition matrix: -c in the owner column, +p in every column the
/// owner has a synapse to. Forgetting rules only carry their -c.
inline IntMatrix spiking_matrix(const SnpSystem& sys) {
    IntMatrix m(sys.rule_count(), sys.neuron_count());
    for (std::size_t i = 0; i < sys.rule_count(); ++i) {
        const Rule& r = sys.rules[i];
        m(i, r.owner) = -r.consume;
        if (r.is_forgetting())
            continue;
        for (std::size_t target : sys.targets_of(r.owner))
            m(i, target) = r.produce;
    }
    return m;
}

/// Spiking matrix plus an environment column holding p for spiking rules of
/// the output neuron.
inline IntMatrix augmented_matrix(const SnpSystem& sys) {
    if (!sys.output)
        throw std::invalid_argument("augmented matrix needs an output neuron");
    const IntMatrix base = spiking_matrix(sys);
    const std::size_t m = sys.neuron_count();
    IntMatrix out(sys.rule_count(), m + 1);
    for (std::size_t i = 0; i < sys.rule_count(); ++i) {
        for (std::size_t j = 0; j < m; ++j)
            out(i, j) = base(i, j);
        const Rule& r = sys.rules[i];
        out(i, m) = (r.owner == *sys.output && !r.is_forgetting()) ? r.produce : 0;
    }
    return out;
}

inline IntMatrix production_matrix(const SnpSystem& sys) {
    IntMatrix pm(sys.rule_count(), sys.neuron_count());
    for (std::size_t i = 0; i < sys.rule_count(); ++i) {
        const Rule& r = sys.rules[i];
        if (r.is_forgetting())
            continue;
        for (std::size_t target : sys.targets_of(r.owner))
            pm(i, target) = r.produce;
    }
    return pm;
}

inline IntMatrix consumption_matrix(const SnpSystem& sys) {
    IntMatrix cm(sys.rule_count(), sys.neuron_count());
    for (std::size_t i = 0; i < sys.rule_count(); ++i)
        cm(i, sys.rules[i].owner) = sys.rules[i].consume;
    return cm;
}

/// m x m structure matrix: -1 on the diagonal, 1 for each synapse.
inline IntMatrix struc_matrix(const SnpSystem& sys) {
    const std::size_t m = sys.neuron_count();
    IntMatrix s(m, m);
    for (std::size_t i = 0; i < m; ++i)
        s(i, i) = -1;
    for (const auto& [from, to] : sys.synapses)
        if (from != to)
            s(from, to) = 1;
    return s;
}

/// Environment emission per rule (last column of the augmented matrix), zeros
/// when the system has no output neuron.
inline IntVector environment_column(const SnpSystem& sys) {
    IntVector e(sys.rule_count(), 0);
    if (!sys.output)
        return e;
    for (std::size_t i = 0; i < sys.rule_count(); ++i) {
        const Rule& r = sys.rules[i];
        if (r.owner == *sys.output && !r.is_forgetting())
            e[i] = r.produce;
    }
    return e;
}

/// The four rule x neuron matrices, built once per system.
struct SystemMatrices {
    IntMatrix spiking;
    IntMatrix production;
    IntMatrix consumption;
    IntVector environment;

    explicit SystemMatrices(const SnpSystem& sys)
        : spiking(spiking_matrix(sys)), production(production_matrix(sys)), consumption(consumption_matrix(sys)),
          environment(environment_column(sys)) {}
};

inline bool synapse_graph_has_cycle(const SnpSystem& sys) {
    const std::size_t m = sys.neuron_count();
    std::vector<std::vector<std::size_t>> adj(m);
    for (const auto& [from, to] : sys.synapses)
        adj[from].push_back(to);
    enum class Color { white, grey, black };
    std::vector<Color> color(m, Color::white);
    for (std::size_t root = 0; root < m; ++root) {
        if (color[root] != Color::white)
            continue;
        // iterative DFS: (node, next child index)
        std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
        color[root] = Color::grey;
        while (!stack.empty()) {
            auto& [node, next] = stack.back();
            if (next < adj[node].size()) {
                const std::size_t child = adj[node][next++];
                if (color[child] == Color::grey)
                    return true;
                if (color[child] == Color::white) {
                    color[child] = Color::grey;
                    stack.emplace_back(child, 0);
                }
            } else {
                color[node] = Color::black;
                stack.pop_back();
            }
        }
    }
    return false;
}

struct StructuralReport {
    std::vector<std::size_t> row_negative_counts;    // per rule
    std::vector<std::size_t> column_negative_counts; // per neuron; equals its rule count
    bool rows_have_unique_negative = true;
    bool rule_columns_have_negative = true;
    // Neurons with a row whose only nonzero entry is its negative one. Rows of
    // forgetting rules look the same, so this is evidence, not proof.
    std::vector<std::size_t> inferred_output_neurons;
    std::vector<std::size_t> out_degree; // distinct positive columns over the neuron's rows
    std::size_t struc_rank = 0;
    bool rank_cycle_hint = false;
    bool dfs_has_cycle = false;
};

inline StructuralReport structural_report(const SnpSystem& sys) {
    const IntMatrix mat = spiking_matrix(sys);
    const std::size_t n = mat.rows();
    const std::size_t m = mat.cols();
    StructuralReport rep;
    rep.row_negative_counts.assign(n, 0);
    rep.column_negative_counts.assign(m, 0);
    rep.out_degree.assign(m, 0);
    std::vector<std::vector<bool>> reaches(m, std::vector<bool>(m, false));
    std::vector<bool> inferred(m, false);

    for (std::size_t i = 0; i < n; ++i) {
        std::size_t nonzero = 0;
        std::optional<std::size_t> negative_col;
        for (std::size_t j = 0; j < m; ++j) {
            if (mat(i, j) != 0)
                ++nonzero;
            if (mat(i, j) < 0) {
                ++rep.row_negative_counts[i];
                ++rep.column_negative_counts[j];
                negative_col = j;
            }
        }
        if (rep.row_negative_counts[i] != 1)
            rep.rows_have_unique_negative = false;
        if (!negative_col)
            continue;
        if (nonzero == 1)
            inferred[*negative_col] = true;
        for (std::size_t j = 0; j < m; ++j)
            if (mat(i, j) > 0)
                reaches[*negative_col][j] = true;
    }
    for (std::size_t j = 0; j < m; ++j) {
        if (!sys.rules_of(j).empty() && rep.column_negative_counts[j] == 0)
            rep.rule_columns_have_negative = false;
        if (inferred[j])
            rep.inferred_output_neurons.push_back(j);
        for (std::size_t t = 0; t < m; ++t)
            if (reaches[j][t])
                ++rep.out_degree[j];
    }
    rep.struc_rank = row_rank(struc_matrix(sys));
    rep.rank_cycle_hint = rep.struc_rank < m;
    rep.dfs_has_cycle = synapse_graph_has_cycle(sys);
    return rep;
}

} // namespace snp

#endif // SNP_MATRICES_HPP
