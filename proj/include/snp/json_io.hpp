#ifndef SNP_JSON_IO_HPP
#define SNP_JSON_IO_HPP

// JSON views of matrices, traces, reports and certificates. Shapes match the
// schemas in docs/schemas/.

#include <json.hpp>

#include <cstddef>
#include <optional>
#include <string>

#include "snp/engine.hpp"
#include "snp/int_matrix.hpp"
#include "snp/matrices.hpp"
#include "snp/reachability.hpp"
#include "snp/system.hpp"

namespace snp {

using Json = nlohmann::ordered_json;

template <typename T>
Json optional_json(const std::optional<T>& v) {
    return v ? Json(*v) : Json(nullptr);
}

inline Json to_json(const IntMatrix& mat) {
    Json data = Json::array();
    for (std::size_t r = 0; r < mat.rows(); ++r)
        data.push_back(Json(IntVector(mat.row(r).begin(), mat.row(r).end())));
    return Json{{"rows", mat.rows()}, {"cols", mat.cols()}, {"data", std::move(data)}};
}

inline Json to_json(const ValidationReport& report) {
    Json issues = Json::array();
    for (const auto& i : report.issues)
        issues.push_back({{"severity", i.severity == Severity::error ? "error" : "warning"},
                          {"code", i.code},
                          {"message", i.message},
                          {"location", i.location}});
    return Json{{"valid", report.ok()}, {"issues", std::move(issues)}};
}

inline Json to_json(const TraceRecord& r) {
    return Json{{"k", r.k},
                {"C", r.config},
                {"Sp", optional_json(r.sp)},
                {"Iv", optional_json(r.iv)},
                {"St", r.st},
                {"DSt", r.dst},
                {"NG", optional_json(r.ng)},
                {"emitted", optional_json(r.emitted)}};
}

inline Json to_json(const StepIdentityCheck& c) {
    return Json{{"k", c.k},
                {"rst_lhs", c.rst.lhs},
                {"rst_rhs", c.rst.rhs},
                {"rst_holds", c.rst.holds()},
                {"recorded", c.recorded},
                {"v1", optional_json(c.v1)},
                {"v2", c.v2},
                {"oracle", c.oracle},
                {"v1_matches", c.v1_matches()},
                {"v2_matches", c.v2_matches()},
                {"oracle_matches", c.oracle_matches()}};
}

inline Json to_json(const ClosedFormReport& rep) {
    Json prefixes = Json::array();
    for (const auto& p : rep.prefixes)
        prefixes.push_back({{"k", p.k},
                            {"closed_form", p.closed_form},
                            {"recorded", p.recorded},
                            {"v2_iterate", p.v2_iterate},
                            {"matches_recorded", p.matches_recorded()},
                            {"matches_v2", p.matches_v2()}});
    return Json{{"prefixes", std::move(prefixes)}, {"first_failing_prefix", optional_json(rep.first_failing_prefix)}};
}

inline Json to_json(const StructuralReport& rep) {
    return Json{{"row_negative_counts", rep.row_negative_counts},
                {"column_negative_counts", rep.column_negative_counts},
                {"rows_have_unique_negative", rep.rows_have_unique_negative},
                {"rule_columns_have_negative", rep.rule_columns_have_negative},
                {"inferred_output_neurons", rep.inferred_output_neurons},
                {"out_degree", rep.out_degree},
                {"struc_rank", rep.struc_rank},
                {"rank_cycle_hint", rep.rank_cycle_hint},
                {"dfs_has_cycle", rep.dfs_has_cycle}};
}

inline Json to_json(const FailureRow& row) {
    return Json{{"i", row.i},
                {"residual", row.residual},
                {"Sp", optional_json(row.sp)},
                {"C", row.config},
                {"reason", row.reason}};
}

inline Json to_json(const ReachabilityCertificate& cert) {
    Json candidates = Json::array();
    for (const auto& c : cert.candidates) {
        Json failures = Json::array();
        for (const auto& f : c.failures)
            failures.push_back(to_json(f));
        candidates.push_back({{"sum_vector", c.sum_vector}, {"k", optional_json(c.k)}, {"failures", std::move(failures)}});
    }
    return Json{{"verdict", to_string(cert.verdict)},
                {"k", optional_json(cert.k)},
                {"origin", cert.origin},
                {"target", cert.target},
                {"configurations", cert.configurations},
                {"spiking_vectors", cert.spiking_vectors},
                {"sum_vector", optional_json(cert.sum_vector)},
                {"candidates", std::move(candidates)},
                {"message", cert.message}};
}

} // namespace snp

#endif // SNP_JSON_IO_HPP
