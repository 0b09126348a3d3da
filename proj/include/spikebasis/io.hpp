#pragma once

#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "spikebasis/basis.hpp"
#include "spikebasis/costs.hpp"
#include "spikebasis/process.hpp"
#include "spikebasis/search.hpp"
#include "spikebasis/verify.hpp"

namespace spikebasis {

using ordered_json = nlohmann::ordered_json;

/// 17 significant digits: enough to round-trip any double exactly.
inline std::string format_sig17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

// ---------------------------------------------------------------------------
// Enum names used in files and on the command line.

inline std::string process_kind_name(ProcessKind k) {
    return k == ProcessKind::SimpleSpike ? "simple" : "generalized";
}

inline ProcessKind parse_process_kind(const std::string& s) {
    if (s == "simple") return ProcessKind::SimpleSpike;
    if (s == "generalized") return ProcessKind::GeneralizedSpike;
    throw std::invalid_argument("unknown process kind: " + s);
}

inline std::string cost_name_string(CostName c) {
    switch (c) {
        case CostName::Lp: return "cp";
        case CostName::MarginalEntropy: return "ch";
        case CostName::Kurtosis: return "ckappa";
    }
    return "?";
}

inline CostName parse_cost_name(const std::string& s) {
    if (s == "cp") return CostName::Lp;
    if (s == "ch") return CostName::MarginalEntropy;
    if (s == "ckappa") return CostName::Kurtosis;
    throw std::invalid_argument("unknown cost name: " + s);
}

inline std::string cost_method_name(CostMethod m) {
    switch (m) {
        case CostMethod::ClosedForm: return "closed";
        case CostMethod::MonteCarlo: return "mc";
        case CostMethod::ExactDiscrete: return "exact";
    }
    return "?";
}

inline std::string dictionary_name(DictionaryClass d) {
    switch (d) {
        case DictionaryClass::Orthonormal: return "on";
        case DictionaryClass::VolumePreserving: return "slpm";
        case DictionaryClass::General: return "gl";
    }
    return "?";
}

inline DictionaryClass parse_dictionary(const std::string& s) {
    if (s == "on") return DictionaryClass::Orthonormal;
    if (s == "slpm") return DictionaryClass::VolumePreserving;
    if (s == "gl") return DictionaryClass::General;
    throw std::invalid_argument("unknown dictionary: " + s);
}

// ---------------------------------------------------------------------------
// Matrices. CSV: one row per line, comma separated, 17 significant digits.
// JSON: {"n": ..., "entries": [[row], ...]} for square matrices.

inline std::string matrix_to_csv(const Matrix& m) {
    std::string out;
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            if (j) out += ',';
            out += format_sig17(m(i, j));
        }
        out += '\n';
    }
    return out;
}

inline Matrix matrix_from_csv(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(cell, &used);
            } catch (const std::exception&) {
                throw std::invalid_argument("matrix_from_csv: bad number '" + cell + "'");
            }
            while (used < cell.size() &&
                   (cell[used] == ' ' || cell[used] == '\t' || cell[used] == '\r'))
                ++used;
            if (used != cell.size())
                throw std::invalid_argument("matrix_from_csv: bad number '" + cell + "'");
            row.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::invalid_argument("matrix_from_csv: no rows");
    const std::size_t cols = rows.front().size();
    Matrix m(static_cast<int>(rows.size()), static_cast<int>(cols));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) throw std::invalid_argument("matrix_from_csv: ragged rows");
        for (std::size_t j = 0; j < cols; ++j)
            m(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    }
    return m;
}

inline ordered_json matrix_to_json(const Matrix& m) {
    if (!m.square()) throw std::invalid_argument("matrix_to_json: matrix must be square");
    ordered_json j;
    j["n"] = m.rows();
    ordered_json entries = ordered_json::array();
    for (int i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (int k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
        entries.push_back(std::move(row));
    }
    j["entries"] = std::move(entries);
    return j;
}

inline Matrix matrix_from_json(const ordered_json& j) {
    if (!j.contains("n") || !j.contains("entries"))
        throw std::invalid_argument("matrix_from_json: need fields 'n' and 'entries'");
    const int n = j.at("n").get<int>();
    const auto& entries = j.at("entries");
    if (!entries.is_array() || static_cast<int>(entries.size()) != n)
        throw std::invalid_argument("matrix_from_json: 'entries' must hold n rows");
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
        const auto& row = entries.at(static_cast<std::size_t>(i));
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw std::invalid_argument("matrix_from_json: ragged or non-square 'entries'");
        for (int k = 0; k < n; ++k) m(i, k) = row.at(static_cast<std::size_t>(k)).get<double>();
    }
    return m;
}

// ---------------------------------------------------------------------------
// Files.

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

/// Load a square matrix from a .json or .csv file, dispatching on extension.
inline Matrix load_matrix(const std::string& path) {
    const std::string text = read_file(path);
    if (ends_with(path, ".json")) return matrix_from_json(ordered_json::parse(text));
    return matrix_from_csv(text);
}

inline void save_matrix(const std::string& path, const Matrix& m) {
    if (ends_with(path, ".json"))
        write_file(path, matrix_to_json(m).dump(2) + "\n");
    else
        write_file(path, matrix_to_csv(m));
}

// ---------------------------------------------------------------------------
// Reports. Coordinates and spike locations are 1-based in all file formats.

inline std::string samples_to_csv(const std::vector<SpikeSample>& samples) {
    std::string out = "sample,location,amplitude\n";
    for (std::size_t i = 0; i < samples.size(); ++i) {
        out += std::to_string(i + 1);
        out += ',';
        out += std::to_string(samples[i].location + 1);
        out += ',';
        out += format_sig17(samples[i].amplitude);
        out += '\n';
    }
    return out;
}

inline ordered_json cost_report_to_json(const CostReport& r) {
    ordered_json j;
    j["cost"] = cost_name_string(r.cost_name);
    if (r.p) j["p"] = *r.p;
    j["process"] = process_kind_name(r.process);
    j["method"] = cost_method_name(r.method);
    j["value"] = r.value;
    j["per_coordinate"] = r.per_coordinate;
    if (r.sample_count) j["sample_count"] = *r.sample_count;
    if (r.seed) j["seed"] = *r.seed;
    if (r.standard_error) j["standard_error"] = *r.standard_error;
    return j;
}

inline ordered_json marginal_model_to_json(const MarginalModel& m) {
    ordered_json j;
    j["coordinate"] = m.coordinate + 1;
    j["weight"] = m.weight;
    j["sigmas"] = m.sigmas;
    j["has_atom"] = m.has_atom;
    if (m.has_atom) j["atom_mass"] = m.atom_mass();
    return j;
}

inline ordered_json moment_table_to_json(const MomentTable& t) {
    ordered_json j;
    j["coordinate"] = t.coordinate + 1;
    j["mu2"] = t.mu2;
    j["mu4"] = t.mu4;
    j["kurtosis"] = t.kurtosis;
    ordered_json moments = ordered_json::array();
    for (std::size_t i = 0; i < t.ps.size(); ++i) {
        ordered_json row;
        row["p"] = t.ps[i];
        row["value"] = t.abs_moments[i];
        moments.push_back(std::move(row));
    }
    j["abs_moments"] = std::move(moments);
    return j;
}

inline ordered_json search_result_to_json(const SearchResult& r) {
    ordered_json j;
    j["best_cost"] = r.best_cost;
    j["converged"] = r.converged;
    j["canonical_residual"] = r.canonical_residual;
    j["restarts_agreeing"] = r.restarts_agreeing;
    j["best_basis"] = matrix_to_json(r.best_basis.entries());
    return j;
}

inline std::string trace_to_csv(const std::vector<TracePoint>& trace) {
    std::string out = "restart,iteration,cost\n";
    for (const TracePoint& t : trace) {
        out += std::to_string(t.restart);
        out += ',';
        out += std::to_string(t.iteration);
        out += ',';
        out += format_sig17(t.cost);
        out += '\n';
    }
    return out;
}

inline std::string sl_divergence_to_csv(const std::vector<SlDivergenceRow>& rows) {
    std::string out = "a,cost,formula,difference\n";
    for (const SlDivergenceRow& r : rows) {
        out += format_sig17(r.a);
        out += ',';
        out += format_sig17(r.cost);
        out += ',';
        out += format_sig17(r.formula);
        out += ',';
        out += format_sig17(r.difference);
        out += '\n';
    }
    return out;
}

inline std::string brute_force_to_csv(const BruteForce2dResult& r) {
    std::string out = "theta,cost\n";
    for (std::size_t i = 0; i < r.thetas.size(); ++i) {
        out += format_sig17(r.thetas[i]);
        out += ',';
        out += format_sig17(r.costs[i]);
        out += '\n';
    }
    return out;
}

inline ordered_json theorem_report_to_json(const TheoremReport& rep) {
    ordered_json j;
    j["ns"] = rep.ns;
    j["seed"] = rep.seed;
    ordered_json checks = ordered_json::array();
    for (const TheoremCheck& c : rep.checks) {
        ordered_json cj;
        cj["label"] = c.label;
        cj["passed"] = c.passed;
        cj["details"] = c.details;
        checks.push_back(std::move(cj));
    }
    j["checks"] = std::move(checks);
    j["all_passed"] = rep.all_passed;
    return j;
}

// ---------------------------------------------------------------------------
// Run manifest: one JSON file per CLI invocation recording what ran and what
// it wrote. The manifest carries the only timestamp; result files stay
// timestamp-free so identical runs stay byte-identical.

struct RunManifest {
    std::string command;
    ordered_json config;
    std::uint64_t seed = 0;
    std::string tool_version;
    std::string timestamp;
    std::vector<std::string> outputs;
};

inline std::string current_timestamp_utc() {
    std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return std::string(buf);
}

inline ordered_json manifest_to_json(const RunManifest& m) {
    ordered_json j;
    j["command"] = m.command;
    j["config"] = m.config;
    j["seed"] = m.seed;
    j["tool_version"] = m.tool_version;
    j["timestamp"] = m.timestamp;
    j["outputs"] = m.outputs;
    return j;
}

}  // namespace spikebasis
