#include "hdr/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "hdr/error.hpp"
#include "hdr/kernels.hpp"

namespace hdr {

namespace {

double sentinel(const ExperimentConfig& c) {
    const ManifoldKind& k = c.density.kind();
    if (k.is_compact()) return k.diameter();
    double s = 0.0;
    for (std::size_t a = 0; a < c.box->lo.size(); ++a) s += std::pow(c.box->hi[a] - c.box->lo[a], 2);
    return std::sqrt(s);
}

GridPtr make_grid(const ExperimentConfig& c, std::size_t resolution, std::uint64_t probe_seed) {
    GridSpec spec{c.density.kind(), resolution, c.box, probe_seed};
    return build_grid(spec);
}

GridSet true_set(const GridPtr& grid, const std::vector<double>& f_nodes, double lambda) {
    kernels::Mask m(f_nodes.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = f_nodes[i] >= lambda ? 1 : 0;
    return GridSet(grid, std::move(m));
}

// Shared per-replicate state: sample, fitted estimate, density values at the
// sample points.
struct Fit {
    PointCloud sample;
    std::optional<DensityModel> fn;
    std::vector<double> values;
    double kappa = kNaN;
};

Fit fit(const ExperimentConfig& c, std::size_t n, std::uint64_t seed) {
    Fit out{c.density.sample(n, seed), std::nullopt, {}, kNaN};
    if (c.oracle_density) {
        out.fn.emplace(c.density);
    } else {
        const KernelKind kind = default_kernel(c.density.kind());
        const std::vector<double> grid = c.candidates();
        const double chosen = cv_select(out.sample, kind, grid).parameter;
        out.kappa = kind == KernelKind::GaussianEuclidean ? chosen / c.kappa_multiplier : chosen * c.kappa_multiplier;
        out.fn.emplace(KernelEstimate(out.sample, KernelConfig{kind, out.kappa}));
    }
    out.values = out.fn->evaluate(out.sample);
    return out;
}

void measure(const ExperimentConfig& c, const GridPtr& grid, const GridSet& truth, const HdrEstimate& est,
             ReplicateRow& row) {
    row.selected = est.selected.size();
    row.components = connected_components(est).count;
    const GridSet discrete = GridSet::discretize(grid, est.set);
    row.ball_symdiff = discrete.symmetric_difference(truth);
    if (discrete.is_empty() || truth.is_empty()) {
        row.hausdorff = sentinel(c);
        row.flagged = true;
    } else {
        row.hausdorff = hausdorff_distance(discrete, truth);
    }
}

double sup_error(const DensityModel& fn, const PointCloud& nodes, const std::vector<double>& f_nodes) {
    const std::vector<double> v = fn.evaluate(nodes);
    double worst = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) worst = std::max(worst, std::abs(v[i] - f_nodes[i]));
    return worst;
}

std::uint64_t replicate_seed(const ExperimentConfig& c, std::size_t rep) { return mix_seed(c.seed, rep); }
std::uint64_t sample_seed(std::uint64_t rep_seed, std::size_t n) { return mix_seed(rep_seed, n); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Setup {
    GridPtr grid;
    std::vector<double> f_nodes;
    GridPtr density_grid;
    std::vector<double> f_density_nodes;
};

Setup setup(const ExperimentConfig& c) {
    c.validate();
    Setup s;
    s.grid = make_grid(c, c.grid_resolution, mix_seed(c.seed, 0x67726964));
    double min_rn = HUGE_VAL;
    for (double r : c.rn) min_rn = std::min(min_rn, r);
    if (!(s.grid->dispersion() < min_rn / 4.0)) {
        throw ConfigError("grid dispersion " + std::to_string(s.grid->dispersion()) + " is not below r_n/4 = " +
                          std::to_string(min_rn / 4.0) + "; raise the grid resolution");
    }
    s.f_nodes = DensityModel(c.density).evaluate(s.grid->nodes());
    s.density_grid = make_grid(c, c.density_grid_resolution, mix_seed(c.seed, 0x64656e73));
    s.f_density_nodes = DensityModel(c.density).evaluate(s.density_grid->nodes());
    return s;
}

}  // namespace

// ---- configuration -----------------------------------------------------------

void ExperimentConfig::validate() const {
    if (n.empty()) throw ConfigError("empty sample-size schedule");
    for (std::size_t i = 0; i < n.size(); ++i) {
        if (n[i] < 2) throw ConfigError("sample sizes must be at least 2");
        if (i > 0 && n[i] <= n[i - 1]) throw ConfigError("sample-size schedule must be strictly increasing");
    }
    if (replicates < 1) throw ConfigError("replicate count must be at least 1");
    if (rn.empty() || (rn.size() != 1 && rn.size() != n.size())) {
        throw ConfigError("r_n schedule needs one value or one per sample size");
    }
    for (double r : rn) {
        if (!(r > 0.0)) throw ConfigError("r_n must be > 0");
    }
    for (double g : gammas) {
        if (!(g > 0.0 && g < 1.0)) throw ConfigError("gamma must lie in (0, 1)");
    }
    if (!(kappa_multiplier > 0.0)) throw ConfigError("kappa multiplier must be > 0");
    if (!density.kind().is_compact() && !box) throw ConfigError("Euclidean experiments need a bounding box");
}

std::vector<double> ExperimentConfig::candidates() const {
    if (!cv_grid.empty()) return cv_grid;
    if (default_kernel(density.kind()) == KernelKind::GaussianEuclidean) return log_spaced(-6.0, 2.0, 40);
    return log_spaced();
}

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json j{{"density", hdr::to_json(density)},
                     {"rn", rn},
                     {"n", n},
                     {"replicates", replicates},
                     {"seed", seed},
                     {"grid_resolution", grid_resolution},
                     {"density_grid_resolution", density_grid_resolution},
                     {"cv_grid", cv_grid},
                     {"kappa_multiplier", kappa_multiplier},
                     {"oracle_density", oracle_density},
                     {"oracle_n", oracle_n}};
    if (lambda) j["lambda"] = *lambda;
    if (!gammas.empty()) j["gammas"] = gammas;
    if (box) j["box"] = {{"lo", box->lo}, {"hi", box->hi}};
    if (!output.empty()) j["output"] = output;
    return j;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    try {
        if (j.contains("density")) {
            const auto& d = j.at("density");
            if (d.is_string()) {
                if (d.get<std::string>() != "two_vmf") throw ConfigError("unknown named density " + d.dump());
                c.density = AnalyticMixture::two_vmf_benchmark(j.value("kappa", 10.0));
            } else {
                c.density = mixture_from_json(d);
            }
        }
        if (j.contains("lambda")) c.lambda = j.at("lambda").get<double>();
        if (j.contains("gammas")) c.gammas = j.at("gammas").get<std::vector<double>>();
        if (j.contains("gamma")) c.gammas = {j.at("gamma").get<double>()};
        if (j.contains("rn")) {
            c.rn = j.at("rn").is_array() ? j.at("rn").get<std::vector<double>>()
                                         : std::vector<double>{j.at("rn").get<double>()};
        }
        c.n = j.at("n").get<std::vector<std::size_t>>();
        c.replicates = j.value("replicates", c.replicates);
        c.seed = j.value("seed", c.seed);
        c.grid_resolution = j.value("grid_resolution", c.grid_resolution);
        c.density_grid_resolution = j.value("density_grid_resolution", c.density_grid_resolution);
        if (j.contains("box")) c.box = BoundingBox{j["box"].at("lo").get<std::vector<double>>(), j["box"].at("hi").get<std::vector<double>>()};
        if (j.contains("cv_grid")) {
            const auto& g = j.at("cv_grid");
            c.cv_grid = g.is_array() ? g.get<std::vector<double>>()
                                     : log_spaced(g.value("lo_exp2", 0.0), g.value("hi_exp2", 10.0), g.value("count", 40));
        }
        c.kappa_multiplier = j.value("kappa_multiplier", c.kappa_multiplier);
        c.oracle_density = j.value("oracle_density", c.oracle_density);
        c.oracle_n = j.value("oracle_n", c.oracle_n);
        c.output = j.value("output", std::string());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad experiment config: ") + e.what());
    }
    c.validate();
    return c;
}

std::string ExperimentConfig::hash() const {
    nlohmann::json j = to_json();
    j.erase("output");
    const std::string text = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---- studies -----------------------------------------------------------------

RunRecord run_convergence_study(const ExperimentConfig& c) {
    if (!c.lambda) throw ConfigError("convergence study needs lambda");
    const auto t0 = std::chrono::steady_clock::now();
    const Setup s = setup(c);
    const GridSet truth = true_set(s.grid, s.f_nodes, *c.lambda);
    RunRecord rec{"convergence", c.hash(), s.grid->dispersion(), 0.0, {}};
    for (std::size_t i = 0; i < c.n.size(); ++i) {
        for (std::size_t r = 0; r < c.replicates; ++r) {
            ReplicateRow row;
            row.n = c.n[i];
            row.replicate = r;
            row.seed = sample_seed(replicate_seed(c, r), c.n[i]);
            row.lambda = *c.lambda;
            row.lambda_true = *c.lambda;
            row.rn = c.rn_at(i);
            row.dispersion = s.grid->dispersion();
            Fit f = fit(c, row.n, row.seed);
            row.kappa = f.kappa;
            const HdrEstimate est = estimate_hdr(split_sample(f.sample, f.values, row.lambda), row.rn);
            measure(c, s.grid, truth, est, row);
            row.dn = sup_error(*f.fn, s.density_grid->nodes(), s.f_density_nodes);
            rec.rows.push_back(row);
        }
    }
    rec.wall_seconds = seconds_since(t0);
    return rec;
}

RunRecord run_level_study(const ExperimentConfig& c) {
    if (c.gammas.empty()) throw ConfigError("level study needs a gamma schedule");
    const auto t0 = std::chrono::steady_clock::now();
    const Setup s = setup(c);
    RunRecord rec{"level", c.hash(), s.grid->dispersion(), 0.0, {}};
    std::vector<double> levels;
    std::vector<GridSet> truths;
    for (std::size_t g = 0; g < c.gammas.size(); ++g) {
        levels.push_back(true_level(c.density, c.gammas[g], c.oracle_n, mix_seed(c.seed, 0x6f72 + g)));
        truths.push_back(true_set(s.grid, s.f_nodes, levels.back()));
    }
    for (std::size_t i = 0; i < c.n.size(); ++i) {
        for (std::size_t r = 0; r < c.replicates; ++r) {
            const std::uint64_t seed = sample_seed(replicate_seed(c, r), c.n[i]);
            Fit f = fit(c, c.n[i], seed);
            const double dn = sup_error(*f.fn, s.density_grid->nodes(), s.f_density_nodes);
            for (std::size_t g = 0; g < c.gammas.size(); ++g) {
                ReplicateRow row;
                row.n = c.n[i];
                row.replicate = r;
                row.seed = seed;
                row.gamma = c.gammas[g];
                row.lambda = estimate_level(f.values, row.gamma);
                row.lambda_true = levels[g];
                row.rn = c.rn_at(i);
                row.kappa = f.kappa;
                row.dispersion = s.grid->dispersion();
                row.dn = dn;
                const HdrEstimate est = estimate_hdr(split_sample(f.sample, f.values, row.lambda), row.rn);
                measure(c, s.grid, truths[g], est, row);
                rec.rows.push_back(row);
            }
        }
    }
    rec.wall_seconds = seconds_since(t0);
    return rec;
}

RunRecord compare_plugin(const ExperimentConfig& c) {
    if (!c.lambda) throw ConfigError("plug-in comparison needs lambda");
    const auto t0 = std::chrono::steady_clock::now();
    const Setup s = setup(c);
    const GridSet truth = true_set(s.grid, s.f_nodes, *c.lambda);
    RunRecord rec{"plugin", c.hash(), s.grid->dispersion(), 0.0, {}};
    for (std::size_t i = 0; i < c.n.size(); ++i) {
        for (std::size_t r = 0; r < c.replicates; ++r) {
            ReplicateRow row;
            row.n = c.n[i];
            row.replicate = r;
            row.seed = sample_seed(replicate_seed(c, r), c.n[i]);
            row.lambda = *c.lambda;
            row.lambda_true = *c.lambda;
            row.rn = c.rn_at(i);
            row.dispersion = s.grid->dispersion();
            Fit f = fit(c, row.n, row.seed);
            row.kappa = f.kappa;
            const HdrEstimate est = estimate_hdr(split_sample(f.sample, f.values, row.lambda), row.rn);
            measure(c, s.grid, truth, est, row);
            const GridSet plug = plugin_hdr(*f.fn, row.lambda, s.grid);
            row.plugin_components = grid_components(plug).count;
            row.plugin_symdiff = plug.symmetric_difference(truth);
            row.dn = sup_error(*f.fn, s.density_grid->nodes(), s.f_density_nodes);
            rec.rows.push_back(row);
        }
    }
    rec.wall_seconds = seconds_since(t0);
    return rec;
}

DkwResult run_dkw_trials(const AnalyticMixture& density, std::size_t n, std::size_t trials, std::uint64_t seed,
                         std::size_t reference_n) {
    if (n < 2 || trials < 1) throw ConfigError("DKW trials need n >= 2 and at least one trial");
    const DensityModel f(density);
    const std::vector<double> reference = f.evaluate(density.sample(reference_n, mix_seed(seed, 0x726566)));
    DkwResult out;
    out.n = n;
    out.bound = std::sqrt(std::log(static_cast<double>(n)) / static_cast<double>(n));
    for (std::size_t t = 0; t < trials; ++t) {
        const std::vector<double> values = f.evaluate(density.sample(n, mix_seed(seed, t)));
        const double dev = upper_tail_deviation(values, reference);
        out.deviations.push_back(dev);
        if (dev <= out.bound) ++out.within;
    }
    return out;
}

// ---- summaries ---------------------------------------------------------------

Quartiles quartiles(std::vector<double> v) {
    std::erase_if(v, [](double x) { return std::isnan(x); });
    if (v.empty()) return {};
    std::sort(v.begin(), v.end());
    auto at = [&](double p) {
        const double pos = p * static_cast<double>(v.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const std::size_t hi = std::min(lo + 1, v.size() - 1);
        return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
    };
    return {at(0.25), at(0.5), at(0.75)};
}

namespace {

nlohmann::json quartile_json(const std::vector<double>& v) {
    const Quartiles q = quartiles(v);
    auto num = [](double x) { return std::isnan(x) ? nlohmann::json(nullptr) : nlohmann::json(x); };
    return {{"q1", num(q.q1)}, {"median", num(q.median)}, {"q3", num(q.q3)}};
}

std::string cell(double v) {
    if (std::isnan(v)) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

nlohmann::json summarize(const RunRecord& record) {
    std::map<std::pair<std::size_t, double>, std::vector<const ReplicateRow*>> groups;
    for (const auto& row : record.rows) groups[{row.n, std::isnan(row.gamma) ? -1.0 : row.gamma}].push_back(&row);
    nlohmann::json out{{"study", record.study},
                       {"config_hash", record.config_hash},
                       {"dispersion", record.dispersion},
                       {"wall_seconds", record.wall_seconds},
                       {"groups", nlohmann::json::array()}};
    for (const auto& [key, rows] : groups) {
        std::vector<double> dh, dh_clean, dn, level, kappa;
        std::size_t flagged = 0;
        for (const auto* r : rows) {
            dh.push_back(r->hausdorff);
            if (r->flagged) ++flagged;
            else dh_clean.push_back(r->hausdorff);
            dn.push_back(r->dn);
            level.push_back(std::abs(r->lambda - r->lambda_true));
            kappa.push_back(r->kappa);
        }
        nlohmann::json g{{"n", key.first},
                         {"replicates", rows.size()},
                         {"flagged", flagged},
                         {"hausdorff", quartile_json(dh)},
                         {"hausdorff_unflagged", quartile_json(dh_clean)},
                         {"dn", quartile_json(dn)},
                         {"level_error", quartile_json(level)},
                         {"kappa", quartile_json(kappa)}};
        if (key.second >= 0.0) g["gamma"] = key.second;
        out["groups"].push_back(g);
    }
    return out;
}

std::vector<std::string> row_lines(const RunRecord& record) {
    std::vector<std::string> out;
    for (const auto& r : record.rows) {
        std::ostringstream f;
        f << record.study << ',' << record.config_hash << ',' << r.n << ',' << r.replicate << ',' << r.seed << ','
          << cell(r.gamma) << ',' << cell(r.lambda) << ',' << cell(r.lambda_true) << ',' << cell(r.rn) << ','
          << cell(r.kappa) << ',' << cell(r.hausdorff) << ',' << (r.flagged ? 1 : 0) << ',' << cell(r.dn) << ','
          << cell(r.dispersion) << ',' << r.selected << ',' << r.components << ',' << r.plugin_components << ','
          << r.ball_symdiff << ',' << r.plugin_symdiff;
        out.push_back(f.str());
    }
    return out;
}

void append_rows_csv(const std::filesystem::path& path, const RunRecord& record) {
    const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
    std::ofstream f(path, std::ios::app);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    if (fresh) {
        f << "study,config_hash,n,replicate,seed,gamma,lambda,lambda_true,rn,kappa,hausdorff,flagged,dn,dispersion,"
             "selected,components,plugin_components,ball_symdiff,plugin_symdiff\n";
    }
    for (const auto& line : row_lines(record)) f << line << '\n';
}

}  // namespace hdr
