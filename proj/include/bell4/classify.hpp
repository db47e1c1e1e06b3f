// Separability-class exclusion from optimized Bell violations.
//
// Each class carries an upper bound on |<D4^(i)>| per operator. A state whose
// optimized violation exceeds a bound (beyond a tolerance) cannot belong to
// that class. Not violating any bound certifies nothing.

#pragma once

#include "bell4/optimize.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace bell4 {

struct SeparabilityClass {
    enum class Kind { fully_separable, tri_separable, bi_separable_2x2, bi_separable_1x3, unrestricted };

    Kind kind = Kind::unrestricted;
    /// tri_separable: the entangled pair {i, j}. bi_separable_2x2: the pair
    /// containing qubit 1 (the partition is {pair | rest}). bi_separable_1x3:
    /// the singleton in qubits[0].
    std::vector<int> qubits;
    std::array<double, 4> thresholds{2, 2, 2, 2};

    /// Stable identifier, e.g. "tri_separable_12", "bi_separable_13_24", "bi_separable_1_234".
    std::string id() const {
        auto digits = [](const std::vector<int>& v) {
            std::string s;
            for (int q : v) s += static_cast<char>('0' + q);
            return s;
        };
        auto rest = [&]() {
            std::vector<int> r;
            for (int q = 1; q <= 4; ++q) {
                bool in = false;
                for (int x : qubits) in = in || x == q;
                if (!in) r.push_back(q);
            }
            return digits(r);
        };
        switch (kind) {
            case Kind::fully_separable: return "fully_separable";
            case Kind::tri_separable: return "tri_separable_" + digits(qubits);
            case Kind::bi_separable_2x2: return "bi_separable_" + digits(qubits) + "_" + rest();
            case Kind::bi_separable_1x3: return "bi_separable_" + digits(qubits) + "_" + rest();
            case Kind::unrestricted: return "unrestricted";
        }
        return "unknown";
    }

    /// Product structure of the pure members of this class.
    Partition partition() const {
        std::vector<int> r;
        for (int q = 1; q <= 4; ++q) {
            bool in = false;
            for (int x : qubits) in = in || x == q;
            if (!in) r.push_back(q);
        }
        switch (kind) {
            case Kind::fully_separable: return {{1}, {2}, {3}, {4}};
            case Kind::tri_separable: return {qubits, {r[0]}, {r[1]}};
            case Kind::bi_separable_2x2:
            case Kind::bi_separable_1x3: return {qubits, r};
            case Kind::unrestricted: return {{1, 2, 3, 4}};
        }
        return {{1, 2, 3, 4}};
    }
};

/// The fifteen classes with their per-operator bounds: fully separable (1,1,1,1);
/// tri-separable with pair {i,j}: 1 at i and j, 3/2 elsewhere; 2+2 bi-separable:
/// 3/2 everywhere; 1+3 bi-separable: sqrt(3) everywhere; unrestricted: 2.
inline std::vector<SeparabilityClass> threshold_table() {
    using K = SeparabilityClass::Kind;
    const double r3 = std::sqrt(3.0);
    std::vector<SeparabilityClass> t;
    t.push_back({K::fully_separable, {}, {1, 1, 1, 1}});
    for (int i = 1; i <= 4; ++i)
        for (int j = i + 1; j <= 4; ++j) {
            std::array<double, 4> th{1.5, 1.5, 1.5, 1.5};
            th[static_cast<std::size_t>(i - 1)] = 1.0;
            th[static_cast<std::size_t>(j - 1)] = 1.0;
            t.push_back({K::tri_separable, {i, j}, th});
        }
    for (int j = 2; j <= 4; ++j) t.push_back({K::bi_separable_2x2, {1, j}, {1.5, 1.5, 1.5, 1.5}});
    for (int i = 1; i <= 4; ++i) t.push_back({K::bi_separable_1x3, {i}, {r3, r3, r3, r3}});
    t.push_back({K::unrestricted, {}, {2, 2, 2, 2}});
    return t;
}

inline SeparabilityClass find_class(const std::string& id) {
    for (const auto& c : threshold_table())
        if (c.id() == id) return c;
    throw input_error("unknown separability class '" + id + "'");
}

struct ClassificationReport {
    std::array<double, 4> violations{};
    double omega_max = 0.0;
    std::vector<SeparabilityClass> excluded;
    std::vector<SeparabilityClass> consistent;
    double tolerance = 1e-6;
    std::array<OptimizeResult, 4> bell_results;
    OptimizeResult omega_result;

    bool is_excluded(const std::string& id) const {
        for (const auto& c : excluded)
            if (c.id() == id) return true;
        return false;
    }
};

/// Sorts every class of the table into excluded / consistent for a violation vector.
inline void apply_thresholds(ClassificationReport& report) {
    report.excluded.clear();
    report.consistent.clear();
    for (const auto& c : threshold_table()) {
        bool out = false;
        for (std::size_t k = 0; k < 4; ++k) out = out || report.violations[k] > c.thresholds[k] + report.tolerance;
        (out ? report.excluded : report.consistent).push_back(c);
    }
}

/// Optimizes all four operators and omega, then applies the class bounds.
inline ClassificationReport classify(const DensityMatrix& rho, const OptimizeConfig& cfg, double tolerance = 1e-6) {
    if (!(tolerance >= 0.0)) throw input_error("tolerance must be nonnegative");
    ClassificationReport report;
    report.tolerance = tolerance;
    for (int i = 1; i <= 4; ++i) {
        report.bell_results[static_cast<std::size_t>(i - 1)] = seesaw_bell(rho, i, cfg);
        report.violations[static_cast<std::size_t>(i - 1)] = report.bell_results[static_cast<std::size_t>(i - 1)].best_value;
    }
    report.omega_result = seesaw_omega(rho, cfg);
    report.omega_max = report.omega_result.best_value;
    for (double v : report.violations)
        if (v > 2.0 + 1e-8) throw numerical_error("optimized violation exceeds 2: " + std::to_string(v));
    apply_thresholds(report);
    return report;
}

}  // namespace bell4
