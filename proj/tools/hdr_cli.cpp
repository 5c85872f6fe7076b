// Command-line front end: estimation, level selection, simulation studies,
// data ingestion and plot export.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>

#include <CLI11.hpp>

#include "hdr/density.hpp"
#include "hdr/error.hpp"
#include "hdr/experiment.hpp"
#include "hdr/hdr.hpp"
#include "hdr/io.hpp"

namespace fs = std::filesystem;
using namespace hdr;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitIngest = 3;
constexpr int kExitUsage = 64;

std::size_t default_grid_resolution() {
    if (const char* env = std::getenv("HDR_GRID_RES")) {
        try {
            return std::stoul(env);
        } catch (const std::exception&) {
            throw ConfigError(std::string("HDR_GRID_RES is not a count: ") + env);
        }
    }
    return 20000;
}

struct InputOptions {
    std::string path;
    std::string format = "sample";
    std::string angle_unit = "deg";

    void add(CLI::App* app) {
        app->add_option("-i,--input", path, "input file")->required();
        app->add_option("--format", format, "sample | comets | phases")
            ->check(CLI::IsMember({"sample", "comets", "phases"}));
        app->add_option("--angle-unit", angle_unit, "comet angle unit: deg | rad");
    }

    PointCloud load() const {
        if (format == "comets") return io::ingest_comets(path, io::angle_unit_from_name(angle_unit));
        if (format == "phases") return io::ingest_phases(path);
        return io::read_sample(path);
    }
};

struct KernelOptions {
    std::string kernel;
    std::optional<double> parameter;
    double cv_lo = 0.0, cv_hi = 10.0;
    std::size_t cv_count = 40;

    void add(CLI::App* app) {
        app->add_option("--kernel", kernel, "vmf | von_mises | gaussian (default: by manifold)");
        app->add_option("--kappa,--bandwidth", parameter, "fixed concentration or bandwidth (default: cross-validated)");
        app->add_option("--cv-lo", cv_lo, "log2 of the smallest candidate");
        app->add_option("--cv-hi", cv_hi, "log2 of the largest candidate");
        app->add_option("--cv-count", cv_count, "number of candidates");
    }

    KernelEstimate fit(const PointCloud& sample) const {
        const KernelKind kind = kernel.empty() ? default_kernel(sample.kind()) : kernel_from_name(kernel);
        double p = 0.0;
        if (parameter) {
            p = *parameter;
        } else {
            const std::vector<double> grid = log_spaced(cv_lo, cv_hi, cv_count);
            p = cv_select(sample, kind, grid).parameter;
        }
        return KernelEstimate(sample, KernelConfig{kind, p});
    }
};

void emit(const std::string& out, const nlohmann::json& j) {
    if (out.empty() || out == "-") std::cout << j.dump(2) << '\n';
    else io::write_json(out, j);
}

ExperimentConfig load_config(const std::string& path, std::optional<std::uint64_t> seed, std::optional<std::size_t> reps,
                             std::optional<std::size_t> grid_res) {
    nlohmann::json j = io::read_json(path);
    if (seed) j["seed"] = *seed;
    if (reps) j["replicates"] = *reps;
    if (grid_res) j["grid_resolution"] = *grid_res;
    return ExperimentConfig::from_json(j);
}

void write_record(const ExperimentConfig& config, const RunRecord& rec, const std::string& out) {
    std::string base = out.empty() ? config.output : out;
    if (base.empty()) base = rec.study;
    io::write_json(base + ".summary.json", summarize(rec));
    append_rows_csv(base + ".csv", rec);
    std::cout << summarize(rec).dump(2) << '\n';
}

int run(int argc, char** argv) {
    CLI::App app{"Highest density region estimation on spheres, tori and Euclidean space", "hdr"};
    app.require_subcommand(1);

    // estimate
    auto* est_cmd = app.add_subcommand("estimate", "ball-union estimate at a level or a probability content");
    InputOptions est_in;
    KernelOptions est_kernel;
    std::optional<double> est_lambda, est_gamma;
    double est_rn = 0.0;
    std::string est_out;
    est_in.add(est_cmd);
    est_kernel.add(est_cmd);
    auto* lam_opt = est_cmd->add_option("--lambda", est_lambda, "density level");
    est_cmd->add_option("--gamma", est_gamma, "probability content is 1 - gamma")->excludes(lam_opt);
    est_cmd->add_option("--rn", est_rn, "ball radius r_n")->required();
    est_cmd->add_option("-o,--out", est_out, "estimate JSON (default stdout)");

    // level
    auto* lvl_cmd = app.add_subcommand("level", "estimated level for a probability content");
    InputOptions lvl_in;
    KernelOptions lvl_kernel;
    double lvl_gamma = 0.0;
    lvl_in.add(lvl_cmd);
    lvl_kernel.add(lvl_cmd);
    lvl_cmd->add_option("--gamma", lvl_gamma, "probability content is 1 - gamma")->required();

    // simulate / convergence
    std::string sim_config, sim_study, sim_out;
    std::optional<std::uint64_t> sim_seed;
    std::optional<std::size_t> sim_reps, sim_grid;
    auto* sim_cmd = app.add_subcommand("simulate", "run a seeded study from a JSON config");
    auto* conv_cmd = app.add_subcommand("convergence", "convergence-in-n study from a JSON config");
    for (auto* c : {sim_cmd, conv_cmd}) {
        c->add_option("config", sim_config, "experiment config JSON")->required();
        c->add_option("--seed", sim_seed, "override the config seed");
        c->add_option("--reps", sim_reps, "override the replicate count");
        c->add_option("--grid-res", sim_grid, "override the grid resolution");
        c->add_option("-o,--out", sim_out, "output path prefix (<prefix>.csv, <prefix>.summary.json)");
    }
    sim_cmd->add_option("--study", sim_study, "level | plugin | convergence | dkw (default: level with gammas, else convergence)")
        ->check(CLI::IsMember({"level", "plugin", "convergence", "dkw"}));

    // ingest
    auto* ing_cmd = app.add_subcommand("ingest", "convert comet orbits or gene phases into a sample file");
    InputOptions ing_in;
    std::string ing_out;
    ing_in.add(ing_cmd);
    ing_cmd->add_option("-o,--out", ing_out, "sample CSV")->required();

    // export-boundary
    auto* bnd_cmd = app.add_subcommand("export-boundary", "boundary nodes of an estimate for plotting");
    std::string bnd_est, bnd_out;
    std::size_t bnd_res = 0;
    bnd_cmd->add_option("-e,--estimate", bnd_est, "estimate JSON")->required();
    bnd_cmd->add_option("--grid-res", bnd_res, "grid resolution (default $HDR_GRID_RES or 20000)");
    bnd_cmd->add_option("-o,--out", bnd_out, "boundary CSV")->required();

    // components
    auto* cmp_cmd = app.add_subcommand("components", "connected components of an estimate");
    std::string cmp_est;
    cmp_cmd->add_option("-e,--estimate", cmp_est, "estimate JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    if (est_cmd->parsed()) {
        if (!est_lambda && !est_gamma) throw ConfigError("estimate needs --lambda or --gamma");
        const PointCloud sample = est_in.load();
        const KernelEstimate fn = est_kernel.fit(sample);
        const DensityModel model(fn);
        HdrEstimate est = est_gamma ? estimate_hdr_by_probability(sample, model, *est_gamma, est_rn)
                                    : estimate_hdr(split_sample(sample, model, *est_lambda), est_rn);
        nlohmann::json j = to_json(est);
        j["kernel"] = to_json(fn.config());
        j["n"] = sample.size();
        emit(est_out, j);
    } else if (lvl_cmd->parsed()) {
        const PointCloud sample = lvl_in.load();
        const KernelEstimate fn = lvl_kernel.fit(sample);
        const std::vector<double> values = fn.evaluate(sample);
        emit("", {{"gamma", lvl_gamma}, {"lambda", estimate_level(values, lvl_gamma)}, {"kernel", to_json(fn.config())}});
    } else if (sim_cmd->parsed() || conv_cmd->parsed()) {
        const ExperimentConfig config = load_config(sim_config, sim_seed, sim_reps, sim_grid);
        std::string study = conv_cmd->parsed() ? "convergence" : sim_study;
        if (study.empty()) study = config.gammas.empty() ? "convergence" : "level";
        if (study == "dkw") {
            const DkwResult r = run_dkw_trials(config.density, config.n.front(), config.replicates, config.seed);
            const nlohmann::json j{{"n", r.n}, {"bound", r.bound}, {"within", r.within},
                                   {"fraction", r.fraction()}, {"deviations", r.deviations}};
            emit(sim_out.empty() ? "" : sim_out + ".summary.json", j);
        } else {
            const RunRecord rec = study == "convergence" ? run_convergence_study(config)
                                  : study == "plugin"    ? compare_plugin(config)
                                                         : run_level_study(config);
            write_record(config, rec, sim_out);
        }
    } else if (ing_cmd->parsed()) {
        const PointCloud sample = ing_in.load();
        io::write_sample_csv(ing_out, sample);
        std::cout << sample.size() << " points\n";
    } else if (bnd_cmd->parsed()) {
        const BallUnionSet set = io::ball_union_from_json(io::read_json(bnd_est));
        const GridPtr grid = build_grid(GridSpec{set.kind(), bnd_res ? bnd_res : default_grid_resolution(), {}, 0x9d15});
        io::write_boundary_csv(bnd_out, GridSet::discretize(grid, set));
    } else if (cmp_cmd->parsed()) {
        const nlohmann::json j = io::read_json(cmp_est);
        HdrEstimate est{io::ball_union_from_json(j), j.value("lambda", 0.0), std::nullopt, {}};
        const Components c = connected_components(est);
        emit("", {{"components", c.count}, {"labels", c.labels}});
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    static const std::set<std::string> commands{"estimate", "level", "simulate", "convergence",
                                                "ingest", "export-boundary", "components"};
    const bool help = argc >= 2 && (std::string(argv[1]) == "-h" || std::string(argv[1]) == "--help");
    if (argc < 2 || (!help && !commands.count(argv[1]))) {
        if (argc >= 2) std::cerr << "unknown subcommand '" << argv[1] << "'\n";
        std::cerr << "usage: hdr <command> [options]\n"
                     "commands: estimate, level, simulate, convergence, ingest, export-boundary, components\n"
                     "run 'hdr <command> --help' for the options of a command\n";
        return kExitUsage;
    }
    try {
        return run(argc, argv);
    } catch (const IngestError& e) {
        std::cerr << "ingestion error: " << e.what() << '\n';
        return kExitIngest;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const DomainError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const SelectionError& e) {
        std::cerr << "selection error: " << e.what() << '\n';
        return kExitValidation;
    }
}
