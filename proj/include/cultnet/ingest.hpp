#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cultnet/types.hpp"

#include <json.hpp>

namespace cultnet {

enum class VarKind { binary, ordinal, categorical };

/// One survey variable: code, measurement kind and ordered category support.
struct VariableSpec {
    std::string code;
    VarKind kind = VarKind::ordinal;
    std::vector<int> support;  // strictly increasing
    std::string label;

    bool in_support(int v) const {
        for (int s : support)
            if (s == v) return true;
        return false;
    }
};

/// The ten cultural traits in their fixed catalog order.
std::vector<VariableSpec> default_catalog();

/// Integer responses for one country; `missing(r,c)` masks unusable cells.
struct ResponseMatrix {
    IntMatrix values;
    BoolMatrix missing;

    int rows() const { return static_cast<int>(values.rows()); }
    int cols() const { return static_cast<int>(values.cols()); }
};

struct SurveyDataset {
    std::vector<VariableSpec> catalog;
    std::map<std::string, ResponseMatrix> countries;  // ISO alpha-2 -> responses

    std::vector<std::string> country_codes() const {
        std::vector<std::string> out;
        out.reserve(countries.size());
        for (const auto& [code, _] : countries) out.push_back(code);
        return out;
    }
};

/// Empirical pmf/cdf over the categories actually observed for one variable.
struct EmpiricalMarginal {
    std::string variable;
    std::map<int, double> pmf;
    std::map<int, double> cdf;
    long n_obs = 0;
};

/// Parse a UTF-8 CSV with a header row. Requires a `country` column plus one
/// column per catalog variable; Y002/Y003 may instead be derived from their
/// raw question columns (V62,V63 and V12,V18,V19,V21). Negative integers are
/// missing (WVS refusal/DK codes); out-of-support values are rejected.
SurveyDataset parse_survey(const std::string& path, const std::vector<VariableSpec>& catalog);

/// Post-materialism index Y002 from first/second choice of social values.
/// {1,3} are materialist picks, {2,4} post-materialist. Missing propagates.
std::optional<int> derive_postmaterialism(std::optional<int> v62, std::optional<int> v63);

/// Autonomy index Y003 from child-quality mention indicators, recoded to [1,5]:
/// (independence + determination) - (faith + obedience) + 3.
std::optional<int> derive_autonomy(std::optional<int> v12, std::optional<int> v18,
                                   std::optional<int> v19, std::optional<int> v21);

/// countries x p matrix of per-variable means over non-missing cells, with
/// rows in sorted country-code order.
Matrix country_means(const SurveyDataset& dataset);

std::vector<EmpiricalMarginal> empirical_marginals(const ResponseMatrix& matrix,
                                                   const std::vector<VariableSpec>& catalog);

nlohmann::json dataset_to_json(const SurveyDataset& dataset);
SurveyDataset dataset_from_json(const nlohmann::json& j);

nlohmann::json marginals_to_json(const std::vector<EmpiricalMarginal>& marginals);
std::vector<EmpiricalMarginal> marginals_from_json(const nlohmann::json& j);

nlohmann::json catalog_to_json(const std::vector<VariableSpec>& catalog);
std::vector<VariableSpec> catalog_from_json(const nlohmann::json& j);

}  // namespace cultnet
