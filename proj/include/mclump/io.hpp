#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mclump/blockcode.hpp"
#include "mclump/chain.hpp"
#include "mclump/graph.hpp"
#include "mclump/jointsource.hpp"
#include "mclump/lump.hpp"
#include "mclump/partition.hpp"

namespace mclump {

inline double to_bits(double nats) { return nats / std::log(2.0); }

namespace detail {

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline nlohmann::json parse_json(const std::string& text, const std::string& what) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ValidationError(what + ": malformed JSON");
    return j;
}

inline const nlohmann::json& field(const nlohmann::json& j, const char* key,
                                   const std::string& what) {
    auto it = j.find(key);
    if (it == j.end()) throw ValidationError(what + ": missing field \"" + key + "\"");
    return *it;
}

inline std::vector<std::vector<double>> number_rows(const nlohmann::json& j,
                                                    const std::string& what) {
    if (!j.is_array()) throw ValidationError(what + ": expected an array of rows");
    std::vector<std::vector<double>> rows;
    for (const auto& r : j) {
        if (!r.is_array()) throw ValidationError(what + ": expected an array of rows");
        std::vector<double> row;
        for (const auto& v : r) {
            if (!v.is_number()) throw ValidationError(what + ": non-numeric entry");
            row.push_back(v.get<double>());
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline bool has_extension(const std::string& path, const std::string& ext) {
    return path.size() > ext.size() &&
           path.compare(path.size() - ext.size(), ext.size(), ext) == 0;
}

// Numeric CSV: one row per line, comma-separated, blank lines skipped.
inline std::vector<std::vector<double>> parse_csv_rows(const std::string& text,
                                                       const std::string& what) {
    std::vector<std::vector<double>> rows;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ValidationError(what + ": cannot parse \"" + cell + "\" as a number");
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace detail

inline void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path);
    out << content;
}

// --- chain files ---

struct ChainFile {
    TransitionMatrix P;
    std::vector<std::string> labels;  // empty if the file carries none
};

// JSON form: {"states": N, "P": [[...], ...], "labels": [...]} with labels
// optional. CSV form (.csv): the bare matrix, one row per line.
inline ChainFile load_chain(const std::string& path) {
    const std::string what = "chain file " + path;
    std::string text = detail::read_text_file(path);
    if (detail::has_extension(path, ".csv")) {
        auto rows = detail::parse_csv_rows(text, what);
        return ChainFile{TransitionMatrix::from_rows(rows), {}};
    }
    nlohmann::json j = detail::parse_json(text, what);
    const auto& states = detail::field(j, "states", what);
    if (!states.is_number_unsigned() || states.get<std::size_t>() == 0)
        throw ValidationError(what + ": \"states\" must be a positive integer");
    std::size_t n = states.get<std::size_t>();
    auto rows = detail::number_rows(detail::field(j, "P", what), what);
    if (rows.size() != n)
        throw ValidationError(what + ": \"P\" has " + std::to_string(rows.size()) +
                              " rows, expected " + std::to_string(n));
    ChainFile out{TransitionMatrix::from_rows(rows), {}};
    if (j.contains("labels")) {
        const auto& lab = j["labels"];
        if (!lab.is_array() || lab.size() != n)
            throw ValidationError(what + ": \"labels\" must list one name per state");
        for (const auto& s : lab) {
            if (!s.is_string()) throw ValidationError(what + ": labels must be strings");
            out.labels.push_back(s.get<std::string>());
        }
    }
    return out;
}

inline nlohmann::json chain_json(const TransitionMatrix& P,
                                 const std::vector<std::string>& labels = {}) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t x = 0; x < P.size(); ++x) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t y = 0; y < P.size(); ++y) row.push_back(P(x, y));
        rows.push_back(std::move(row));
    }
    nlohmann::json j{{"states", P.size()}, {"P", std::move(rows)}};
    if (!labels.empty()) j["labels"] = labels;
    return j;
}

// {"inputs": n, "outputs": m, "W": [[...], ...]}
inline Matrix load_channel(const std::string& path) {
    const std::string what = "channel file " + path;
    nlohmann::json j = detail::parse_json(detail::read_text_file(path), what);
    std::size_t n = detail::field(j, "inputs", what).get<std::size_t>();
    std::size_t m = detail::field(j, "outputs", what).get<std::size_t>();
    auto rows = detail::number_rows(detail::field(j, "W", what), what);
    Matrix W = Matrix::from_rows(rows);
    if (W.rows != n || W.cols != m)
        throw ValidationError(what + ": \"W\" is " + std::to_string(W.rows) + "x" +
                              std::to_string(W.cols) + ", expected " + std::to_string(n) + "x" +
                              std::to_string(m));
    require_channel(W, n);
    return W;
}

// {"nx": n, "nz": m, "q": [[...], ...]}
inline JointDistribution load_joint(const std::string& path) {
    const std::string what = "joint distribution file " + path;
    nlohmann::json j = detail::parse_json(detail::read_text_file(path), what);
    std::size_t nx = detail::field(j, "nx", what).get<std::size_t>();
    std::size_t nz = detail::field(j, "nz", what).get<std::size_t>();
    auto rows = detail::number_rows(detail::field(j, "q", what), what);
    Matrix q = Matrix::from_rows(rows);
    if (q.rows != nx || q.cols != nz)
        throw ValidationError(what + ": \"q\" is " + std::to_string(q.rows) + "x" +
                              std::to_string(q.cols) + ", expected " + std::to_string(nx) + "x" +
                              std::to_string(nz));
    return JointDistribution(nx, nz, std::move(q.a));
}

// {"n_in": n, "n_out": m, "map": [...]}
inline LumpingFunction load_lumping(const std::string& path) {
    const std::string what = "lumping file " + path;
    nlohmann::json j = detail::parse_json(detail::read_text_file(path), what);
    std::size_t n_in = detail::field(j, "n_in", what).get<std::size_t>();
    std::size_t n_out = detail::field(j, "n_out", what).get<std::size_t>();
    const auto& m = detail::field(j, "map", what);
    if (!m.is_array()) throw ValidationError(what + ": \"map\" must be an array");
    std::vector<int> map;
    for (const auto& v : m) map.push_back(v.get<int>());
    return LumpingFunction(n_in, n_out, std::move(map));
}

inline nlohmann::json lumping_json(const LumpingFunction& g) {
    return nlohmann::json{
        {"n_in", g.domain_size()}, {"n_out", g.range_size()}, {"map", g.map()}};
}

// Observations: a JSON array, or whitespace/comma separated integers.
inline std::vector<int> load_observations(const std::string& path) {
    const std::string what = "observation file " + path;
    std::string text = detail::read_text_file(path);
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw ValidationError(what + ": empty");
    std::vector<int> obs;
    if (text[first] == '[') {
        nlohmann::json j = detail::parse_json(text, what);
        for (const auto& v : j) {
            if (!v.is_number_integer()) throw ValidationError(what + ": non-integer entry");
            obs.push_back(v.get<int>());
        }
        return obs;
    }
    for (char& c : text)
        if (c == ',') c = ' ';
    std::istringstream in(text);
    std::string token;
    while (in >> token) {
        try {
            std::size_t used = 0;
            int v = std::stoi(token, &used);
            if (used != token.size()) throw std::invalid_argument(token);
            obs.push_back(v);
        } catch (const std::exception&) {
            throw ValidationError(what + ": cannot parse \"" + token + "\" as an integer");
        }
    }
    return obs;
}

// --- result serialization ---

inline nlohmann::json partition_json(const CliquePartition& p) {
    return nlohmann::json{{"size", p.size()}, {"blocks", p.blocks}};
}

inline nlohmann::json loss_report_json(const LossReport& rep, bool bits = false) {
    auto conv = [&](double nats) { return bits ? to_bits(nats) : nats; };
    nlohmann::json j;
    j["units"] = bits ? "bits" : "nats";
    j["epsilon"] = rep.epsilon;
    j["conditional_entropy"] = conv(rep.conditional_entropy);
    j["bound_first"] =
        rep.bound_first ? nlohmann::json(conv(*rep.bound_first)) : nlohmann::json(nullptr);
    j["bound_second"] =
        rep.bound_second ? nlohmann::json(conv(*rep.bound_second)) : nlohmann::json(nullptr);
    j["lossless"] = rep.lossless;
    return j;
}

inline nlohmann::json chain_summary_json(const TransitionMatrix& P, bool bits = false) {
    StructureReport rep = validate_chain(P);
    StationaryDistribution sd = stationary(P);
    AdjacencyMatrix A = adjacency(P);
    double h = entropy_rate(P);
    double lam = spectral_radius(A);
    nlohmann::json j;
    j["N"] = P.size();
    j["irreducible"] = rep.irreducible;
    j["aperiodic"] = rep.aperiodic;
    j["mu"] = sd.mu;
    j[bits ? "entropy_rate_bits" : "entropy_rate_nats"] = bits ? to_bits(h) : h;
    j[bits ? "log_lambda_bits" : "log_lambda_nats"] =
        bits ? to_bits(std::log(lam)) : std::log(lam);
    j["d_max"] = dmax_lower_bound(A);
    return j;
}

inline nlohmann::json block_record_json(const BlockAnalysis& a, bool bits = false) {
    nlohmann::json j;
    j["K"] = a.block_len;
    j["M_K"] = a.alphabet_size;
    j["S_K"] = a.realizable_count;
    j[bits ? "rate_bits" : "rate_nats"] = bits ? to_bits(a.rate) : a.rate;
    j[bits ? "log_lambda_bits" : "log_lambda_nats"] =
        bits ? to_bits(a.log_spectral_radius) : a.log_spectral_radius;
    j["exact"] = a.exact;
    return j;
}

inline nlohmann::json zero_error_json(const ZeroErrorCheck& c, bool bits = false) {
    nlohmann::json j;
    j["units"] = bits ? "bits" : "nats";
    j["edges_subset"] = c.edges_subset;
    j["conditional_entropy"] =
        bits ? to_bits(c.conditional_entropy) : c.conditional_entropy;
    j["entropy_zero"] = c.entropy_zero;
    j["consistent"] = c.consistent;
    return j;
}

inline const char* decode_status_name(DecodeStatus s) {
    switch (s) {
        case DecodeStatus::ok: return "ok";
        case DecodeStatus::impossible: return "impossible";
        default: return "ambiguous";
    }
}

inline nlohmann::json decode_json(const DecodeResult& r) {
    nlohmann::json j;
    j["status"] = decode_status_name(r.status);
    j["states"] = r.states;
    if (r.status != DecodeStatus::ok) j["failure_index"] = r.failure_index;
    if (r.status == DecodeStatus::ambiguous) j["candidates"] = r.candidates;
    return j;
}

// --- graph exports ---

// One "u v" line per edge, vertices 0-based, u < v, lexicographic.
inline std::string edge_list(const Graph& g) {
    std::ostringstream out;
    for (auto [u, v] : g.edges()) out << u << " " << v << "\n";
    return out.str();
}

inline std::string dot(const Graph& g, const std::string& name = "G") {
    std::ostringstream out;
    out << "graph " << name << " {\n";
    for (std::size_t v = 0; v < g.size(); ++v) out << "  " << v << ";\n";
    for (auto [u, v] : g.edges()) out << "  " << u << " -- " << v << ";\n";
    out << "}\n";
    return out.str();
}

inline nlohmann::json graph_json(const Graph& g) {
    return nlohmann::json{{"n", g.size()}, {"edges", g.edges()}};
}

}  // namespace mclump
