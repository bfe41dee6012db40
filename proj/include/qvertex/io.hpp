#pragma once

// JSON vertex / filter-spec ingestion and CSV sweep emission.
//
// Complex numbers are [re, im] arrays; a bare number is read as real.
// Line labels, including "perm", are 1-based.

#include <qvertex/cases.hpp>
#include <qvertex/filter.hpp>

#include <json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace qvertex::io {

using Json = nlohmann::json;

/// Throws ParseError with 1-based line and column of the offending byte.
Json parse_json_text(std::string_view text);

/// Reads a whole file; throws FileError when it cannot be opened.
std::string read_text_file(const std::string& path);

/// Refuses to replace an existing file unless force is set (FileError).
void write_text_file(const std::string& path, std::string_view content, bool force);

Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j, std::string_view what);

Json matrix_to_json(const ComplexMatrix& m);
/// Expects exactly rows x cols; throws ValidationError otherwise.
ComplexMatrix matrix_from_json(const Json& j, Eigen::Index rows, Eigen::Index cols,
                               std::string_view what);

Json case_to_json(const CaseParameters& params);
/// {"name": ..., "params": {...}}; unknown names and keys are rejected.
CaseParameters case_from_json(const Json& j);

/// form "raw": A and B as given.
/// form "st" / "reverse_st": S, T and optional perm assembled into (A, B).
/// form "case": template from "case", renamed by optional perm.
BoundaryPair vertex_from_json(const Json& j);

Json vertex_to_json(const BoundaryPair& p);
Json vertex_to_json(const STForm& f);
Json vertex_to_json(const ReverseSTForm& f);
Json vertex_to_json(const CaseParameters& params, const LineOrder& perm = {});

/// {"pairs": {"12": "low" | "high", "23": ..., "31": ...}, "targets": {...}}.
/// "21" names the same pair as "12". Repeated or missing pairs raise SpecError.
FilterSpec filter_spec_from_text(std::string_view text);

Json coupling_report_to_json(const CouplingReport& r);
Json vertex_class_to_json(const VertexClass& c);

/// Log-spaced grid with exact endpoints. Needs 0 < kmin < kmax and points >= 2.
std::vector<double> log_grid(double kmin, double kmax, int points);

struct SweepResult {
    Eigen::Index n = 0;
    std::vector<double> k;
    std::vector<ComplexMatrix> S;
    double max_flux_defect = 0.0; // worst column | |R_j|^2 + sum |T_ij|^2 - 1 |
};

SweepResult sweep(const BoundaryPair& p, const std::vector<double>& k);

/// Header k,R1..Rn,T12,T13,T21,... (i != j, lexicographic). Values are
/// |.|^2 with 12 significant digits, or _re/_im columns with amplitudes.
std::string sweep_csv(const SweepResult& r, bool amplitudes = false);

} // namespace qvertex::io
