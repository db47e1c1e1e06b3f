// Implementations behind the `bell4` command-line subcommands. Each returns
// data; the executable only handles flags, files and exit codes.

#pragma once

#include "bell4/io.hpp"

#include <cstdlib>
#include <exception>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <thread>
#include <vector>

namespace bell4 {

/// Worker count: BELL4_THREADS if set (>= 1), else the hardware concurrency.
inline unsigned worker_count() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("BELL4_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return std::min<unsigned>(static_cast<unsigned>(v), 256u);
    }
    return hw;
}

/// Evaluates fn(0..n-1) on up to `threads` workers; results keep index order.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, unsigned threads, F fn) {
    std::vector<std::optional<T>> out(n);
    std::vector<std::exception_ptr> errors(n);
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    auto work = [&](unsigned w) {
        for (std::size_t k = w; k < n; k += threads) {
            try {
                out[k].emplace(fn(k));
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    std::vector<T> res;
    res.reserve(n);
    for (auto& o : out) res.push_back(std::move(*o));
    return res;
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

/// Values of the four operators, omega and the correlation-norm sums at fixed settings.
inline json analyze(const StateValue& state, const SettingSet& settings) {
    const DensityMatrix rho = state.density();
    json values = json::array();
    for (int i = 1; i <= 4; ++i) values.push_back(bell_value(rho, settings, i));
    const double w = omega(rho, settings);
    if (w > kOmegaCap + 1e-8) throw numerical_error("omega exceeded 16 at fixed settings");
    const auto t = correlation_tensor(rho);
    json norms = json::array();
    for (double x : t.named_square_norms()) norms.push_back(x);
    return {{"values", values},
            {"omega", w},
            {"lemma_sum", lemma_sum(t)},
            {"named_square_norms", norms},
            {"total_correlation_norm", total_correlation_norm(t)},
            {"purity", rho.purity()},
            {"settings", to_json(settings)}};
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

/// Four-qubit state of a named family with one parameter overridden. Two- and
/// three-qubit families are completed with |0> qubits: schmidt_pair sits on
/// qubits 1,2 (then |00>), ghz3 / w3 on qubits 2,3,4 after |0>.
inline PureState family_state(const std::string& family, std::map<std::string, double> params) {
    auto get = [&](const char* k) {
        auto it = params.find(k);
        if (it == params.end()) throw input_error("family '" + family + "' needs parameter '" + k + "'");
        return it->second;
    };
    const PureState zero = PureState::basis("0");
    if (family == "gghz") return generalized_ghz(get("alpha"));
    if (family == "schmidt_pair") return schmidt_pair(get("alpha")).tensor(PureState::basis("00"));
    if (family == "ghz3") return zero.tensor(ghz_type3(get("delta"), get("alpha"), get("beta"), get("gamma"), get("phi")));
    if (family == "w3") return zero.tensor(w_type3(get("a"), get("b"), get("c")));
    throw input_error("unknown sweep family '" + family + "' (expected gghz, schmidt_pair, ghz3, w3)");
}

struct SweepOptions {
    std::string family = "gghz";
    std::string param = "alpha";
    double from = 0.0;
    double to = std::numbers::pi / 4;
    int steps = 30;
    std::set<int> operators{1, 2, 3, 4};
    std::map<std::string, double> fixed;
    OptimizeConfig cfg;
    bool with_omega = true;
};

/// Grid of `steps` points from `from` to `to` inclusive (a single point when steps = 1).
inline std::vector<double> sweep_grid(double from, double to, int steps) {
    if (steps < 1) throw input_error("steps must be >= 1");
    if (!std::isfinite(from) || !std::isfinite(to)) throw input_error("sweep range must be finite");
    if (steps > 1 && !(to > from)) throw input_error("sweep range is empty: --to must exceed --from");
    std::vector<double> g;
    for (int k = 0; k < steps; ++k) g.push_back(steps == 1 ? from : from + (to - from) * k / (steps - 1));
    return g;
}

inline std::vector<CsvRow> sweep(const SweepOptions& opt, unsigned threads = 1) {
    opt.cfg.validate();
    for (int i : opt.operators)
        if (i < 1 || i > 4) throw input_error("operator index must be in 1..4");
    const auto grid = sweep_grid(opt.from, opt.to, opt.steps);
    // Validate every point before doing any work.
    for (double x : grid) {
        auto p = opt.fixed;
        p[opt.param] = x;
        family_state(opt.family, p);
    }
    return parallel_map<CsvRow>(grid.size(), threads, [&](std::size_t k) {
        auto p = opt.fixed;
        p[opt.param] = grid[k];
        const DensityMatrix rho = pure_to_density(family_state(opt.family, p));
        CsvRow row;
        row.param = grid[k];
        for (int i : opt.operators) row.v[static_cast<std::size_t>(i - 1)] = seesaw_bell(rho, i, opt.cfg).best_value;
        if (opt.with_omega) {
            row.omega = seesaw_omega(rho, opt.cfg).best_value;
            if (*row.omega > kOmegaCap + 1e-8) throw numerical_error("omega exceeded 16 during sweep");
        }
        row.label = opt.family;
        row.seed = opt.cfg.seed;
        return row;
    });
}

// ---------------------------------------------------------------------------
// figure1
// ---------------------------------------------------------------------------

/// Sample classes for the (|<D4^(1)>|, |<D4^(3)>|) scatter.
struct FigureClass {
    std::string label;
    Partition partition;
};

inline const std::vector<FigureClass>& figure_classes() {
    static const std::vector<FigureClass> classes{
        {"fully", {{1}, {2}, {3}, {4}}},
        {"12-3-4", {{1, 2}, {3}, {4}}},
        {"14-2-3", {{1, 4}, {2}, {3}}},
        {"12-34", {{1, 2}, {3, 4}}},
        {"14-23", {{1, 4}, {2, 3}}},
        {"1-234", {{1}, {2, 3, 4}}},
        {"3-124", {{3}, {1, 2, 4}}},
        {"genuine", {{1, 2, 3, 4}}},
    };
    return classes;
}

inline const FigureClass& figure_class(const std::string& label) {
    for (const auto& c : figure_classes())
        if (c.label == label) return c;
    throw input_error("unknown class label '" + label + "'");
}

/// Rectangle bounds (|<D4^(1)>|, |<D4^(3)>|) expected for a figure class from the class thresholds.
inline std::pair<double, double> figure_bounds(const std::string& label) {
    const double r3 = std::sqrt(3.0);
    if (label == "fully") return {1.0, 1.0};
    if (label == "12-3-4") return {1.0, 1.5};
    if (label == "14-2-3") return {1.0, 1.5};
    if (label == "12-34" || label == "14-23") return {1.5, 1.5};
    if (label == "1-234" || label == "3-124") return {r3, r3};
    if (label == "genuine") return {2.0, 2.0};
    throw input_error("unknown class label '" + label + "'");
}

struct FigureOptions {
    int samples = 500;
    std::uint64_t seed = 0;
    std::vector<std::string> classes;  // empty: all
    OptimizeConfig cfg;
};

inline std::vector<CsvRow> figure1(const FigureOptions& opt, unsigned threads = 1) {
    if (opt.samples < 1) throw input_error("samples must be >= 1");
    opt.cfg.validate();
    std::vector<const FigureClass*> chosen;
    if (opt.classes.empty()) {
        for (const auto& c : figure_classes()) chosen.push_back(&c);
    } else {
        for (const auto& l : opt.classes) chosen.push_back(&figure_class(l));
    }
    struct Job {
        const FigureClass* cls;
        std::size_t class_index;
        int sample;
    };
    std::vector<Job> jobs;
    for (std::size_t c = 0; c < chosen.size(); ++c)
        for (int k = 0; k < opt.samples; ++k) jobs.push_back({chosen[c], c, k});
    return parallel_map<CsvRow>(jobs.size(), threads, [&](std::size_t j) {
        const auto& job = jobs[j];
        const std::uint64_t sample_seed = splitmix64(opt.seed ^ splitmix64((job.class_index << 32) | static_cast<std::uint64_t>(job.sample)));
        Rng rng(sample_seed);
        const DensityMatrix rho = pure_to_density(random_partition_member(job.cls->partition, rng));
        OptimizeConfig cfg = opt.cfg;
        cfg.seed = sample_seed;
        CsvRow row;
        row.param = job.sample;
        row.v[0] = seesaw_bell(rho, 1, cfg).best_value;
        row.v[2] = seesaw_bell(rho, 3, cfg).best_value;
        row.label = job.cls->label;
        row.seed = sample_seed;
        return row;
    });
}

}  // namespace bell4
