#include "cultnet/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace cultnet {

namespace {

std::vector<int> range_support(int lo, int hi) {
    std::vector<int> s;
    for (int v = lo; v <= hi; ++v) s.push_back(v);
    return s;
}

// Minimal CSV splitting: commas, optional double-quote wrapping, trimmed.
std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (char c : line) {
        if (quoted) {
            if (c == '"')
                quoted = false;
            else
                cur.push_back(c);
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    for (auto& f : fields) {
        const auto a = f.find_first_not_of(" \t");
        const auto b = f.find_last_not_of(" \t");
        f = (a == std::string::npos) ? std::string() : f.substr(a, b - a + 1);
    }
    return fields;
}

// Parses a cell into value-or-missing. Empty cells and negative codes are
// missing. Non-integer content is a hard error.
std::optional<int> parse_cell(const std::string& cell, long row, const std::string& code) {
    if (cell.empty()) return std::nullopt;
    std::size_t pos = 0;
    int v = 0;
    try {
        v = std::stoi(cell, &pos);
    } catch (const std::exception&) {
        throw DataError("InvalidValue: row " + std::to_string(row) + ", column " + code +
                        ": not an integer: '" + cell + "'");
    }
    if (pos != cell.size())
        throw DataError("InvalidValue: row " + std::to_string(row) + ", column " + code +
                        ": not an integer: '" + cell + "'");
    if (v < 0) return std::nullopt;  // WVS refusal / don't-know codes
    return v;
}

}  // namespace

std::vector<VariableSpec> default_catalog() {
    return {
        {"V10", VarKind::ordinal, range_support(1, 4), "happiness"},
        {"V24", VarKind::binary, range_support(0, 1), "trust"},
        {"V69", VarKind::ordinal, range_support(1, 3), "respect for authority"},
        {"V85", VarKind::ordinal, range_support(1, 3), "voice"},
        {"V152", VarKind::ordinal, range_support(1, 10), "importance of God"},
        {"V203", VarKind::ordinal, range_support(1, 10), "homosexuality"},
        {"V204", VarKind::ordinal, range_support(1, 10), "abortion"},
        {"V211", VarKind::ordinal, range_support(1, 5), "proud of nationality"},
        {"Y002", VarKind::categorical, range_support(1, 3), "post-materialism"},
        {"Y003", VarKind::ordinal, range_support(1, 5), "obedience/independence"},
    };
}

std::optional<int> derive_postmaterialism(std::optional<int> v62, std::optional<int> v63) {
    if (!v62 || !v63) return std::nullopt;
    const auto materialist = [](int v) { return v == 1 || v == 3; };
    const bool m62 = materialist(*v62);
    const bool m63 = materialist(*v63);
    if (m62 && m63) return 1;
    if (!m62 && !m63) return 3;
    return 2;
}

std::optional<int> derive_autonomy(std::optional<int> v12, std::optional<int> v18,
                                   std::optional<int> v19, std::optional<int> v21) {
    if (!v12 || !v18 || !v19 || !v21) return std::nullopt;
    const int raw = (*v12 + *v18) - (*v19 + *v21);  // in [-2, 2]
    return raw + 3;
}

SurveyDataset parse_survey(const std::string& path, const std::vector<VariableSpec>& catalog) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open survey file: " + path);

    std::string header_line;
    if (!std::getline(in, header_line)) throw DataError("MissingColumn: empty file: " + path);
    const auto header = split_csv_line(header_line);

    std::map<std::string, int> col;
    for (std::size_t c = 0; c < header.size(); ++c) col[header[c]] = static_cast<int>(c);

    const auto find_col = [&](const std::string& code) -> int {
        auto it = col.find(code);
        return it == col.end() ? -1 : it->second;
    };

    const int country_col = find_col("country");
    if (country_col < 0) throw DataError("MissingColumn: country");

    // Each catalog variable is read directly when its column exists; Y002 and
    // Y003 fall back to their raw question columns.
    struct Source {
        int direct = -1;
        std::vector<int> raw;  // raw question columns when deriving
    };
    std::vector<Source> sources(catalog.size());
    for (std::size_t j = 0; j < catalog.size(); ++j) {
        const auto& spec = catalog[j];
        sources[j].direct = find_col(spec.code);
        if (sources[j].direct >= 0) continue;
        if (spec.code == "Y002") {
            const int a = find_col("V62"), b = find_col("V63");
            if (a < 0 || b < 0) throw DataError("MissingColumn: Y002 (or raw V62/V63)");
            sources[j].raw = {a, b};
        } else if (spec.code == "Y003") {
            const int a = find_col("V12"), b = find_col("V18");
            const int c = find_col("V19"), d = find_col("V21");
            if (a < 0 || b < 0 || c < 0 || d < 0)
                throw DataError("MissingColumn: Y003 (or raw V12/V18/V19/V21)");
            sources[j].raw = {a, b, c, d};
        } else {
            throw DataError("MissingColumn: " + spec.code);
        }
    }

    const auto validate_raw = [](std::optional<int> v, const std::vector<int>& ok, long row,
                                 const std::string& code) {
        if (!v) return v;
        if (std::find(ok.begin(), ok.end(), *v) == ok.end())
            throw DataError("InvalidValue: row " + std::to_string(row) + ", column " + code + ": " +
                            std::to_string(*v));
        return v;
    };

    std::map<std::string, std::vector<std::vector<std::optional<int>>>> rows_by_country;

    std::string line;
    long row_no = 1;
    while (std::getline(in, line)) {
        ++row_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (static_cast<int>(fields.size()) <= country_col)
            throw DataError("InvalidValue: row " + std::to_string(row_no) + ": too few fields");
        const std::string country = fields[country_col];
        if (country.empty())
            throw DataError("InvalidValue: row " + std::to_string(row_no) + ": empty country code");

        const auto cell_at = [&](int c, const std::string& code) -> std::optional<int> {
            if (c < 0 || c >= static_cast<int>(fields.size())) return std::nullopt;
            return parse_cell(fields[c], row_no, code);
        };

        std::vector<std::optional<int>> rec(catalog.size());
        for (std::size_t j = 0; j < catalog.size(); ++j) {
            const auto& spec = catalog[j];
            std::optional<int> v;
            if (sources[j].direct >= 0) {
                v = cell_at(sources[j].direct, spec.code);
            } else if (spec.code == "Y002") {
                auto v62 = validate_raw(cell_at(sources[j].raw[0], "V62"), {1, 2, 3, 4}, row_no, "V62");
                auto v63 = validate_raw(cell_at(sources[j].raw[1], "V63"), {1, 2, 3, 4}, row_no, "V63");
                v = derive_postmaterialism(v62, v63);
            } else {  // Y003
                auto v12 = validate_raw(cell_at(sources[j].raw[0], "V12"), {0, 1}, row_no, "V12");
                auto v18 = validate_raw(cell_at(sources[j].raw[1], "V18"), {0, 1}, row_no, "V18");
                auto v19 = validate_raw(cell_at(sources[j].raw[2], "V19"), {0, 1}, row_no, "V19");
                auto v21 = validate_raw(cell_at(sources[j].raw[3], "V21"), {0, 1}, row_no, "V21");
                v = derive_autonomy(v12, v18, v19, v21);
            }
            if (v && !spec.in_support(*v))
                throw DataError("InvalidValue: row " + std::to_string(row_no) + ", column " +
                                spec.code + ": " + std::to_string(*v));
            rec[j] = v;
        }
        rows_by_country[country].push_back(std::move(rec));
    }

    SurveyDataset ds;
    ds.catalog = catalog;
    const int p = static_cast<int>(catalog.size());
    for (auto& [code, recs] : rows_by_country) {
        const int n = static_cast<int>(recs.size());
        ResponseMatrix m;
        m.values = IntMatrix::Zero(n, p);
        m.missing = BoolMatrix::Constant(n, p, false);
        for (int r = 0; r < n; ++r)
            for (int j = 0; j < p; ++j) {
                if (recs[r][j]) {
                    m.values(r, j) = *recs[r][j];
                } else {
                    m.missing(r, j) = true;
                }
            }
        ds.countries.emplace(code, std::move(m));
    }
    if (ds.countries.empty()) throw DataError("EmptyCountry: no data rows in " + path);
    return ds;
}

Matrix country_means(const SurveyDataset& dataset) {
    const int p = static_cast<int>(dataset.catalog.size());
    const auto codes = dataset.country_codes();
    Matrix out(static_cast<int>(codes.size()), p);
    for (std::size_t l = 0; l < codes.size(); ++l) {
        const auto& m = dataset.countries.at(codes[l]);
        for (int j = 0; j < p; ++j) {
            double sum = 0.0;
            long cnt = 0;
            for (int r = 0; r < m.rows(); ++r) {
                if (m.missing(r, j)) continue;
                sum += m.values(r, j);
                ++cnt;
            }
            if (cnt == 0)
                throw DataError("AllMissing: country " + codes[l] + ", variable " +
                                dataset.catalog[j].code);
            out(static_cast<int>(l), j) = sum / static_cast<double>(cnt);
        }
    }
    return out;
}

std::vector<EmpiricalMarginal> empirical_marginals(const ResponseMatrix& matrix,
                                                   const std::vector<VariableSpec>& catalog) {
    if (matrix.cols() != static_cast<int>(catalog.size()))
        throw DataError("empirical_marginals: column count does not match catalog");
    std::vector<EmpiricalMarginal> out;
    out.reserve(catalog.size());
    for (int j = 0; j < matrix.cols(); ++j) {
        std::map<int, long> counts;
        long n = 0;
        for (int r = 0; r < matrix.rows(); ++r) {
            if (matrix.missing(r, j)) continue;
            ++counts[matrix.values(r, j)];
            ++n;
        }
        if (n == 0) throw DataError("AllMissing: variable " + catalog[j].code);
        EmpiricalMarginal em;
        em.variable = catalog[j].code;
        em.n_obs = n;
        double cum = 0.0;
        for (const auto& [cat, cnt] : counts) {
            const double f = static_cast<double>(cnt) / static_cast<double>(n);
            em.pmf[cat] = f;
            cum += f;
            em.cdf[cat] = cum;
        }
        out.push_back(std::move(em));
    }
    return out;
}

nlohmann::json catalog_to_json(const std::vector<VariableSpec>& catalog) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& v : catalog) {
        const char* kind = v.kind == VarKind::binary     ? "binary"
                           : v.kind == VarKind::ordinal  ? "ordinal"
                                                         : "categorical";
        arr.push_back({{"code", v.code}, {"kind", kind}, {"support", v.support}, {"label", v.label}});
    }
    return arr;
}

std::vector<VariableSpec> catalog_from_json(const nlohmann::json& j) {
    std::vector<VariableSpec> out;
    for (const auto& e : j) {
        VariableSpec v;
        v.code = e.at("code").get<std::string>();
        const auto kind = e.at("kind").get<std::string>();
        v.kind = kind == "binary"    ? VarKind::binary
                 : kind == "ordinal" ? VarKind::ordinal
                                     : VarKind::categorical;
        v.support = e.at("support").get<std::vector<int>>();
        v.label = e.value("label", std::string());
        if (v.support.empty()) throw DataError("catalog: empty support for " + v.code);
        for (std::size_t i = 1; i < v.support.size(); ++i)
            if (v.support[i] <= v.support[i - 1])
                throw DataError("catalog: support not strictly increasing for " + v.code);
        if (v.kind == VarKind::binary && v.support.size() != 2)
            throw DataError("catalog: binary variable must have 2 categories: " + v.code);
        out.push_back(std::move(v));
    }
    return out;
}

nlohmann::json dataset_to_json(const SurveyDataset& dataset) {
    nlohmann::json j;
    j["catalog"] = catalog_to_json(dataset.catalog);
    nlohmann::json countries = nlohmann::json::object();
    for (const auto& [code, m] : dataset.countries) {
        nlohmann::json rows = nlohmann::json::array();
        for (int r = 0; r < m.rows(); ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (int c = 0; c < m.cols(); ++c) {
                if (m.missing(r, c))
                    row.push_back(nullptr);
                else
                    row.push_back(m.values(r, c));
            }
            rows.push_back(std::move(row));
        }
        countries[code] = std::move(rows);
    }
    j["countries"] = std::move(countries);
    return j;
}

SurveyDataset dataset_from_json(const nlohmann::json& j) {
    SurveyDataset ds;
    ds.catalog = catalog_from_json(j.at("catalog"));
    const int p = static_cast<int>(ds.catalog.size());
    for (const auto& [code, rows] : j.at("countries").items()) {
        const int n = static_cast<int>(rows.size());
        ResponseMatrix m;
        m.values = IntMatrix::Zero(n, p);
        m.missing = BoolMatrix::Constant(n, p, false);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < p; ++c) {
                const auto& cell = rows[r][c];
                if (cell.is_null())
                    m.missing(r, c) = true;
                else
                    m.values(r, c) = cell.get<int>();
            }
        ds.countries.emplace(code, std::move(m));
    }
    return ds;
}

nlohmann::json marginals_to_json(const std::vector<EmpiricalMarginal>& marginals) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& em : marginals) {
        nlohmann::json pmf = nlohmann::json::object();
        for (const auto& [cat, f] : em.pmf) pmf[std::to_string(cat)] = f;
        j[em.variable] = {{"pmf", pmf}, {"n_obs", em.n_obs}};
    }
    return j;
}

std::vector<EmpiricalMarginal> marginals_from_json(const nlohmann::json& j) {
    std::vector<EmpiricalMarginal> out;
    for (const auto& [var, body] : j.items()) {
        EmpiricalMarginal em;
        em.variable = var;
        em.n_obs = body.at("n_obs").get<long>();
        double cum = 0.0;
        std::map<int, double> pmf;
        for (const auto& [cat, f] : body.at("pmf").items()) pmf[std::stoi(cat)] = f.get<double>();
        for (const auto& [cat, f] : pmf) {
            em.pmf[cat] = f;
            cum += f;
            em.cdf[cat] = cum;
        }
        out.push_back(std::move(em));
    }
    return out;
}

}  // namespace cultnet
