// JSON state / settings schemas, report serialization and the CSV row format.
//
// State descriptions (all forms nest):
//   {"type":"pure","amplitudes":[[re,im], ...]}                 2^n entries, n = 1..4
//   {"type":"family","name":"gghz","params":{"alpha":0.39}}
//       families: gghz(alpha), schmidt_pair(alpha), ghz3(delta,alpha,beta,gamma,phi),
//                 w3(a,b,c), haar_pure(seed[,qubits]), maximally_mixed,
//                 product(parts), mixture(terms)
//   {"type":"product","parts":[{"qubits":[1,2],"state":{...}}, ...]}
//   {"type":"mixed","terms":[{"p":0.5,"state":{...}}, ...]}
//   {"type":"maximally_mixed"}
// Settings: {"a":[[x,y,z] x4],"b":[[x,y,z] x4]}

#pragma once

#include "bell4/classify.hpp"
#include "bell4/states.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace bell4 {

using json = nlohmann::json;

inline constexpr const char* kToolVersion = "1.0.0";

/// Schema violation, annotated with the JSON pointer of the offending value.
class schema_error : public input_error {
public:
    schema_error(const std::string& path, const std::string& what)
        : input_error((path.empty() ? std::string("/") : path) + ": " + what), path_(path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

/// A parsed state: pure on 1..4 qubits, or a four-qubit density matrix.
struct StateValue {
    std::variant<PureState, DensityMatrix> value;

    bool is_pure() const { return std::holds_alternative<PureState>(value); }
    const PureState& pure() const { return std::get<PureState>(value); }
    int num_qubits() const { return is_pure() ? pure().num_qubits() : 4; }
    DensityMatrix density() const {
        if (is_pure()) {
            if (pure().num_qubits() != 4) throw input_error("state has " + std::to_string(pure().num_qubits()) + " qubits, expected 4");
            return pure_to_density(pure());
        }
        return std::get<DensityMatrix>(value);
    }
};

namespace detail {

inline double number_at(const json& j, const std::string& path) {
    if (!j.is_number()) throw schema_error(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw schema_error(path, "number must be finite");
    return v;
}

inline double param(const json& params, const std::string& name, const std::string& path) {
    if (!params.is_object() || !params.contains(name)) throw schema_error(path, "missing parameter '" + name + "'");
    return number_at(params.at(name), path + "/" + name);
}

template <class F>
auto rethrow_at(const std::string& path, F f) -> decltype(f()) {
    try {
        return f();
    } catch (const schema_error&) {
        throw;
    } catch (const input_error& e) {
        throw schema_error(path, e.what());
    }
}

inline StateValue parse_state_at(const json& j, const std::string& path);

inline PureState parse_pure_at(const json& j, const std::string& path) {
    auto s = parse_state_at(j, path);
    if (!s.is_pure()) throw schema_error(path, "expected a pure state");
    return s.pure();
}

inline StateValue parse_product(const json& j, const std::string& path) {
    if (!j.contains("parts") || !j.at("parts").is_array()) throw schema_error(path, "product needs a 'parts' array");
    std::vector<StatePart> parts;
    const auto& arr = j.at("parts");
    for (std::size_t k = 0; k < arr.size(); ++k) {
        const std::string p = path + "/parts/" + std::to_string(k);
        const auto& part = arr[k];
        if (!part.is_object() || !part.contains("qubits") || !part.contains("state"))
            throw schema_error(p, "part needs 'qubits' and 'state'");
        std::vector<int> qubits;
        for (std::size_t m = 0; m < part.at("qubits").size(); ++m) {
            const auto& q = part.at("qubits")[m];
            if (!q.is_number_integer()) throw schema_error(p + "/qubits/" + std::to_string(m), "expected an integer");
            qubits.push_back(q.get<int>());
        }
        parts.push_back({parse_pure_at(part.at("state"), p + "/state"), std::move(qubits)});
    }
    return {rethrow_at(path, [&] { return product(parts); })};
}

inline StateValue parse_mixture(const json& j, const std::string& path) {
    if (!j.contains("terms") || !j.at("terms").is_array() || j.at("terms").empty())
        throw schema_error(path, "mixture needs a non-empty 'terms' array");
    const auto& arr = j.at("terms");
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(16, 16);
    double total = 0.0;
    for (std::size_t k = 0; k < arr.size(); ++k) {
        const std::string p = path + "/terms/" + std::to_string(k);
        if (!arr[k].is_object() || !arr[k].contains("p") || !arr[k].contains("state"))
            throw schema_error(p, "term needs 'p' and 'state'");
        const double w = number_at(arr[k].at("p"), p + "/p");
        if (!(w > 0.0)) throw schema_error(p + "/p", "weight must be positive");
        const auto term = parse_state_at(arr[k].at("state"), p + "/state");
        if (term.num_qubits() != 4) throw schema_error(p + "/state", "mixture terms must be four-qubit states");
        acc += w * term.density().matrix().eigen();
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9) throw schema_error(path, "mixture weights must sum to 1");
    return {rethrow_at(path, [&] { return DensityMatrix(ComplexMatrix(acc)); })};
}

inline StateValue parse_family(const json& j, const std::string& path) {
    if (!j.contains("name") || !j.at("name").is_string()) throw schema_error(path, "family needs a 'name'");
    const auto name = j.at("name").get<std::string>();
    const json params = j.value("params", json::object());
    const std::string pp = path + "/params";
    return rethrow_at(path, [&]() -> StateValue {
        if (name == "gghz") return {generalized_ghz(param(params, "alpha", pp))};
        if (name == "schmidt_pair") return {schmidt_pair(param(params, "alpha", pp))};
        if (name == "ghz3")
            return {ghz_type3(param(params, "delta", pp), param(params, "alpha", pp), param(params, "beta", pp),
                              param(params, "gamma", pp), param(params, "phi", pp))};
        if (name == "w3") return {w_type3(param(params, "a", pp), param(params, "b", pp), param(params, "c", pp))};
        if (name == "haar_pure") {
            const double seed = param(params, "seed", pp);
            const int n = params.contains("qubits") ? static_cast<int>(param(params, "qubits", pp)) : 4;
            Rng rng(static_cast<std::uint64_t>(seed));
            return {haar_random_pure(rng, n)};
        }
        if (name == "maximally_mixed") return {DensityMatrix::maximally_mixed()};
        if (name == "product") return parse_product(j, path);
        if (name == "mixture") return parse_mixture(j, path);
        throw schema_error(path + "/name", "unknown family '" + name + "'");
    });
}

inline StateValue parse_state_at(const json& j, const std::string& path) {
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
        throw schema_error(path, "state must be an object with a string 'type'");
    const auto type = j.at("type").get<std::string>();
    if (type == "pure") {
        if (!j.contains("amplitudes") || !j.at("amplitudes").is_array()) throw schema_error(path, "pure state needs 'amplitudes'");
        const auto& arr = j.at("amplitudes");
        std::vector<cplx> amps;
        for (std::size_t k = 0; k < arr.size(); ++k) {
            const std::string p = path + "/amplitudes/" + std::to_string(k);
            if (!arr[k].is_array() || arr[k].size() != 2) throw schema_error(p, "amplitude must be [re, im]");
            amps.emplace_back(number_at(arr[k][0], p + "/0"), number_at(arr[k][1], p + "/1"));
        }
        return {rethrow_at(path + "/amplitudes", [&] { return PureState(amps); })};
    }
    if (type == "family") return parse_family(j, path);
    if (type == "product") return parse_product(j, path);
    if (type == "mixed") return parse_mixture(j, path);
    if (type == "maximally_mixed") return {DensityMatrix::maximally_mixed()};
    throw schema_error(path + "/type", "unknown state type '" + type + "'");
}

inline json vec_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

}  // namespace detail

inline StateValue parse_state(const json& j) { return detail::parse_state_at(j, ""); }

/// Parses JSON text; syntax errors report the byte offset.
inline json parse_json_text(const std::string& text, const std::string& origin = "input") {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw input_error(origin + ": JSON syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str(), path);
}

inline json to_json(const PureState& psi) {
    json amps = json::array();
    for (const auto& a : psi.amplitudes()) amps.push_back(json::array({a.real(), a.imag()}));
    return {{"type", "pure"}, {"amplitudes", amps}};
}

inline SettingSet parse_settings(const json& j) {
    SettingSet s = SettingSet::uniform(UnitVector3::z_axis());
    for (const char* key : {"a", "b"}) {
        const std::string p = std::string("/") + key;
        if (!j.is_object() || !j.contains(key) || !j.at(key).is_array() || j.at(key).size() != 4)
            throw schema_error(p, "settings need four direction vectors");
        for (std::size_t q = 0; q < 4; ++q) {
            const std::string pq = p + "/" + std::to_string(q);
            const auto& v = j.at(key)[q];
            if (!v.is_array() || v.size() != 3) throw schema_error(pq, "direction must be [x, y, z]");
            const Vec3 vec{detail::number_at(v[0], pq + "/0"), detail::number_at(v[1], pq + "/1"), detail::number_at(v[2], pq + "/2")};
            auto u = detail::rethrow_at(pq, [&] { return UnitVector3(vec); });
            (key[0] == 'a' ? s.a : s.b)[q] = u;
        }
    }
    return s;
}

inline json to_json(const SettingSet& s) {
    json a = json::array(), b = json::array();
    for (std::size_t q = 0; q < 4; ++q) {
        a.push_back(detail::vec_json(s.a[q].vec()));
        b.push_back(detail::vec_json(s.b[q].vec()));
    }
    return {{"a", a}, {"b", b}};
}

inline json to_json(const OptimizeConfig& cfg) {
    return {{"seed", cfg.seed}, {"restarts", cfg.restarts}, {"tol", cfg.tol}, {"max_sweeps", cfg.max_sweeps}};
}

/// Provenance block embedded in (or written beside) every output.
inline json make_manifest(const std::string& command, const json& args) {
    return {{"tool", "bell4"},
            {"version", kToolVersion},
            {"command", command},
            {"args", args},
            {"rng", std::string(kRngAlgorithm)},
            {"values", "optimized per state (see-saw over all settings)"}};
}

inline json to_json(const ClassificationReport& r, const OptimizeConfig& cfg) {
    json ex = json::array(), co = json::array(), best = json::array();
    for (const auto& c : r.excluded) ex.push_back(c.id());
    for (const auto& c : r.consistent) co.push_back(c.id());
    for (const auto& br : r.bell_results) best.push_back(to_json(br.best_settings));
    return {{"violations", json::array({r.violations[0], r.violations[1], r.violations[2], r.violations[3]})},
            {"omega_max", r.omega_max},
            {"excluded", ex},
            {"consistent", co},
            {"tolerance", r.tolerance},
            {"optimizer", to_json(cfg)},
            {"best_settings", best},
            {"omega_settings", to_json(r.omega_result.best_settings)}};
}

// ---------------------------------------------------------------------------
// CSV rows: param, v1, v2, v3, v4, omega, class, seed
// ---------------------------------------------------------------------------

inline constexpr const char* kCsvHeader = "param,v1,v2,v3,v4,omega,class,seed";

struct CsvRow {
    double param = 0.0;
    std::array<std::optional<double>, 4> v{};  // empty when not computed
    std::optional<double> omega;
    std::string label;
    std::uint64_t seed = 0;
};

inline std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string to_csv_line(const CsvRow& r) {
    std::string s = format_double(r.param);
    for (const auto& v : r.v) s += "," + (v ? format_double(*v) : std::string());
    s += "," + (r.omega ? format_double(*r.omega) : std::string());
    s += "," + r.label + "," + std::to_string(r.seed);
    return s;
}

inline std::vector<CsvRow> parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) throw input_error("CSV header mismatch");
    std::vector<CsvRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) f.push_back(cell);
        if (!line.empty() && line.back() == ',') f.emplace_back();
        if (f.size() != 8) throw input_error("CSV line " + std::to_string(lineno) + ": expected 8 fields");
        auto num = [&](const std::string& x) -> std::optional<double> {
            if (x.empty()) return std::nullopt;
            return std::stod(x);
        };
        CsvRow r;
        r.param = std::stod(f[0]);
        for (std::size_t k = 0; k < 4; ++k) r.v[k] = num(f[k + 1]);
        r.omega = num(f[5]);
        r.label = f[6];
        r.seed = std::stoull(f[7]);
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace bell4
