// bell4: analyze, classify, sweep and figure1 subcommands.
//
// Exit codes: 0 success, 2 input error, 3 numerical-invariant failure.

#include "bell4/bell4.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw bell4::input_error("cannot write '" + path + "'");
    out << text;
}

std::string csv_text(const std::vector<bell4::CsvRow>& rows) {
    std::string s = std::string(bell4::kCsvHeader) + "\n";
    for (const auto& r : rows) s += bell4::to_csv_line(r) + "\n";
    return s;
}

void write_csv_with_manifest(const std::string& path, const std::vector<bell4::CsvRow>& rows, const bell4::json& manifest) {
    write_text(path, csv_text(rows));
    if (!path.empty() && path != "-") write_text(path + ".manifest.json", manifest.dump(2) + "\n");
}

void add_optimizer_flags(CLI::App* cmd, bell4::OptimizeConfig& cfg) {
    cmd->add_option("--restarts", cfg.restarts, "random restarts per optimization")->check(CLI::PositiveNumber);
    cmd->add_option("--max-sweeps", cfg.max_sweeps, "sweep limit per restart")->check(CLI::PositiveNumber);
    cmd->add_option("--tol", cfg.tol, "stop when a sweep improves the objective by less than this");
    cmd->add_option("--seed", cfg.seed, "RNG seed");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Four-qubit two-setting Bell operators: evaluation, optimization and separability classification"};
    app.require_subcommand(1);
    app.set_version_flag("--version", bell4::kToolVersion);

    // analyze
    std::string state_file, settings_file, out_file;
    auto* analyze = app.add_subcommand("analyze", "evaluate <D4^(i)>, omega and the correlation sums at fixed settings");
    analyze->add_option("--state", state_file, "state description JSON")->required();
    analyze->add_option("--settings", settings_file, "settings JSON {\"a\":[[x,y,z]x4],\"b\":[...]}")->required();
    analyze->add_option("--out", out_file, "report JSON (default stdout)");

    // classify
    bell4::OptimizeConfig classify_cfg;
    double tolerance = 1e-6;
    auto* classify = app.add_subcommand("classify", "optimize all operators and report excluded separability classes");
    classify->add_option("--state", state_file, "state description JSON")->required();
    classify->add_option("--tolerance", tolerance, "threshold comparison tolerance");
    classify->add_option("--out", out_file, "report JSON (default stdout)");
    add_optimizer_flags(classify, classify_cfg);

    // sweep
    bell4::SweepOptions sweep_opt;
    std::vector<std::string> operator_args{"all"}, fixed_args;
    auto* sweep = app.add_subcommand("sweep", "optimized violations along a one-parameter state family");
    sweep->add_option("--family", sweep_opt.family, "gghz, schmidt_pair, ghz3 or w3");
    sweep->add_option("--param", sweep_opt.param, "parameter to vary");
    sweep->add_option("--from", sweep_opt.from, "first value");
    sweep->add_option("--to", sweep_opt.to, "last value");
    sweep->add_option("--steps", sweep_opt.steps, "number of grid points");
    sweep->add_option("--operator", operator_args, "operator index 1..4, repeatable, or 'all'");
    sweep->add_option("--fixed", fixed_args, "other family parameters as name=value, repeatable");
    sweep->add_option("--out", out_file, "CSV output (default stdout)");
    add_optimizer_flags(sweep, sweep_opt.cfg);

    // figure1
    bell4::FigureOptions fig_opt;
    std::string class_list;
    auto* figure = app.add_subcommand("figure1", "sampled (|<D4^(1)>|, |<D4^(3)>|) scatter per separability class");
    figure->add_option("--samples", fig_opt.samples, "samples per class")->check(CLI::PositiveNumber);
    figure->add_option("--classes", class_list, "comma-separated labels (default all): fully,12-3-4,14-2-3,12-34,14-23,1-234,3-124,genuine");
    figure->add_option("--out", out_file, "CSV output (default stdout)");
    add_optimizer_flags(figure, fig_opt.cfg);
    fig_opt.cfg.restarts = 8;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    std::ostringstream argline;
    for (int k = 1; k < argc; ++k) argline << (k > 1 ? " " : "") << argv[k];

    try {
        if (analyze->parsed()) {
            const auto state_json = bell4::read_json_file(state_file);
            const auto settings = bell4::parse_settings(bell4::read_json_file(settings_file));
            auto report = bell4::analyze(bell4::parse_state(state_json), settings);
            report["manifest"] = bell4::make_manifest("analyze", {{"argv", argline.str()}, {"state", state_json}});
            write_text(out_file, report.dump(2) + "\n");
        } else if (classify->parsed()) {
            const auto state_json = bell4::read_json_file(state_file);
            const auto state = bell4::parse_state(state_json);
            const auto report = bell4::classify(state.density(), classify_cfg, tolerance);
            auto j = bell4::to_json(report, classify_cfg);
            j["manifest"] = bell4::make_manifest("classify", {{"argv", argline.str()}, {"state", state_json}});
            write_text(out_file, j.dump(2) + "\n");
        } else if (sweep->parsed()) {
            sweep_opt.operators.clear();
            for (const auto& o : operator_args) {
                if (o == "all") {
                    sweep_opt.operators = {1, 2, 3, 4};
                } else {
                    try {
                        sweep_opt.operators.insert(std::stoi(o));
                    } catch (const std::exception&) {
                        throw bell4::input_error("--operator expects 1..4 or 'all', got '" + o + "'");
                    }
                }
            }
            for (const auto& f : fixed_args) {
                const auto eq = f.find('=');
                if (eq == std::string::npos) throw bell4::input_error("--fixed expects name=value, got '" + f + "'");
                try {
                    sweep_opt.fixed[f.substr(0, eq)] = std::stod(f.substr(eq + 1));
                } catch (const std::exception&) {
                    throw bell4::input_error("--fixed value is not a number in '" + f + "'");
                }
            }
            const auto rows = bell4::sweep(sweep_opt, bell4::worker_count());
            write_csv_with_manifest(out_file, rows,
                                    bell4::make_manifest("sweep", {{"argv", argline.str()},
                                                                   {"family", sweep_opt.family},
                                                                   {"param", sweep_opt.param},
                                                                   {"config", bell4::to_json(sweep_opt.cfg)}}));
        } else if (figure->parsed()) {
            std::stringstream ss(class_list);
            for (std::string item; std::getline(ss, item, ',');)
                if (!item.empty()) fig_opt.classes.push_back(item);
            fig_opt.seed = fig_opt.cfg.seed;
            const auto rows = bell4::figure1(fig_opt, bell4::worker_count());
            write_csv_with_manifest(out_file, rows,
                                    bell4::make_manifest("figure1", {{"argv", argline.str()},
                                                                     {"samples", fig_opt.samples},
                                                                     {"config", bell4::to_json(fig_opt.cfg)}}));
        }
    } catch (const bell4::numerical_error& e) {
        std::cerr << "bell4: numerical invariant violated: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const bell4::input_error& e) {
        std::cerr << "bell4: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "bell4: " << e.what() << "\n";
        return kExitInput;
    }
    return 0;
}
