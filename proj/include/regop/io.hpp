#pragma once

// JSON instance and report formats.
//
//   matrix:       {"rows": r, "cols": c, "entries": [[re, im], ...]}  (row-major)
//   problem:      {"p": number | "inf", "ambient_n": n, "target_m": m,
//                  "basis": [vector, ...], "images": [vector, ...]}
//   vector:       [[re, im], ...]
//
// Doubles are written with shortest round-trip formatting, so write followed
// by read reproduces every bit.

#include "regop/calderon.hpp"
#include "regop/core.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace regop {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "regop-report/1";

Json matrix_to_json(const Matrix& a);
Matrix matrix_from_json(const Json& j);
Json real_matrix_to_json(const RealMatrix& a);
RealMatrix real_matrix_from_json(const Json& j, const char* field);

Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j, const char* field);
Json real_vector_to_json(const RealVector& v);

Json exponent_to_json(ExponentSpec p);
ExponentSpec exponent_from_json(const Json& j);

Json problem_to_json(const ExtensionProblem& prob);
ExtensionProblem problem_from_json(const Json& j);

Json factorization_to_json(const Factorization& f);
Factorization factorization_from_json(const Json& j);
Json dual_witness_to_json(const DualWitness& w);
DualWitness dual_witness_from_json(const Json& j);

/// Parses text; ParseError names the byte offset or field.
Json parse_json(const std::string& text);
std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

Matrix read_matrix(const std::filesystem::path& path);
void write_matrix(const std::filesystem::path& path, const Matrix& a);
ExtensionProblem read_problem(const std::filesystem::path& path);
void write_problem(const std::filesystem::path& path, const ExtensionProblem& prob);

}  // namespace regop
