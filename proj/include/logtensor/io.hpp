#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include <logtensor/fusion.hpp>
#include <logtensor/intertwining.hpp>
#include <logtensor/module.hpp>
#include <logtensor/report.hpp>

namespace logtensor {

inline constexpr const char *kReportSchema = "logtensor-report/1";
inline constexpr const char *kModuleSchema = "logtensor-module/1";
inline constexpr const char *kOperatorSchema = "logtensor-intw/1";

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

nlohmann::json to_json(const SparseMatrix &m); // [[row, col, value], ...]
SparseMatrix matrix_from_json(const nlohmann::json &j);

nlohmann::json to_json(const GeneralizedModule &M);
ModulePtr module_from_json(const nlohmann::json &j);

// [num, den, inum, iden]
nlohmann::json exponent_json(const ExactComplex &n);
ExactComplex exponent_from_json(const nlohmann::json &j);

// {type:{W1,W2,W3}, coefficients:[{n, k, matrix:[[a, b, c, value], ...]}]}
nlohmann::json to_json(const LogIntwOp &Y);
LogIntwOp operator_from_json(const nlohmann::json &j);

// {labels, unit, N:[[j, a, b, value], ...]}
nlohmann::json to_json(const FusionTable &T);
FusionTable table_from_json(const nlohmann::json &j);

nlohmann::json to_json(const VerificationReport &r);
// {"schema": ..., "command": ..., "pass": ..., "reports": [...]}
nlohmann::json suite_json(const std::string &command, const std::vector<VerificationReport> &reports);
std::string report_line(const VerificationReport &r);
std::string suite_text(const std::vector<VerificationReport> &reports);

nlohmann::json read_json_file(const std::string &path);
void write_json_file(const std::string &path, const nlohmann::json &j);

} // namespace logtensor
