#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hdr/density.hpp"
#include "hdr/hdr.hpp"

namespace hdr {

struct ExperimentConfig {
    AnalyticMixture density = AnalyticMixture::two_vmf_benchmark();
    std::optional<double> lambda;
    std::vector<double> gammas;
    std::vector<double> rn;          ///< one radius per sample size, or a single radius
    std::vector<std::size_t> n;      ///< strictly increasing
    std::size_t replicates = 20;
    std::uint64_t seed = 1;
    std::size_t grid_resolution = 100000;        ///< grid for the set comparisons
    std::size_t density_grid_resolution = 5000;  ///< grid for sup |f - f_n|
    std::optional<BoundingBox> box;              ///< Euclidean only
    std::vector<double> cv_grid;                 ///< empty: kernel-dependent default
    double kappa_multiplier = 1.0;               ///< applied to the CV choice
    bool oracle_density = false;                 ///< use f itself in place of f_n
    std::size_t oracle_n = 1000000;
    std::string output;

    void validate() const;
    double rn_at(std::size_t i) const { return rn.size() == 1 ? rn[0] : rn.at(i); }
    std::vector<double> candidates() const;

    nlohmann::json to_json() const;
    static ExperimentConfig from_json(const nlohmann::json& j);
    /// FNV-1a of the canonical JSON form, hex.
    std::string hash() const;
};

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct ReplicateRow {
    std::size_t n = 0;
    std::size_t replicate = 0;
    std::uint64_t seed = 0;
    double gamma = kNaN;
    double lambda = kNaN;       ///< level used by the estimator
    double lambda_true = kNaN;  ///< level of the true set
    double rn = kNaN;
    double kappa = kNaN;        ///< smoothing parameter actually used
    double hausdorff = kNaN;    ///< sentinel (manifold diameter) when flagged
    bool flagged = false;       ///< estimate or true set empty
    double dn = kNaN;           ///< sup over the density grid of |f - f_n|
    double dispersion = kNaN;
    std::size_t selected = 0;
    std::size_t components = 0;
    std::size_t plugin_components = 0;
    std::size_t ball_symdiff = 0;    ///< nodes where the discretized estimate and L differ
    std::size_t plugin_symdiff = 0;  ///< same for the plug-in set
};

struct RunRecord {
    std::string study;
    std::string config_hash;
    double dispersion = 0.0;
    double wall_seconds = 0.0;
    std::vector<ReplicateRow> rows;
};

/// For each (n, replicate): sample f, fit a CV kernel estimate, build the
/// estimate at the configured lambda, and record d_H against the grid
/// discretization of the true set plus D_n.
RunRecord run_convergence_study(const ExperimentConfig& config);

/// As above at the estimated level for every gamma, compared with the true
/// set at the Monte Carlo level lambda_gamma.
RunRecord run_level_study(const ExperimentConfig& config);

/// Ball-union estimate and plug-in set from the same samples: component
/// counts and node-count symmetric differences against the true set.
RunRecord compare_plugin(const ExperimentConfig& config);

struct DkwResult {
    std::size_t n = 0;
    double bound = 0.0;  ///< sqrt(log n / n)
    std::vector<double> deviations;
    std::size_t within = 0;
    double fraction() const { return deviations.empty() ? 0.0 : static_cast<double>(within) / deviations.size(); }
};

/// sup_lambda |P(f(X) >= lambda) - P_n(f(X) >= lambda)| over seeded trials,
/// with P taken from a reference sample of size reference_n.
DkwResult run_dkw_trials(const AnalyticMixture& density, std::size_t n, std::size_t trials, std::uint64_t seed,
                         std::size_t reference_n = 1000000);

struct Quartiles {
    double q1 = kNaN, median = kNaN, q3 = kNaN;
};
Quartiles quartiles(std::vector<double> v);

/// Per-n (and per-gamma) medians and quartiles, with and without flagged rows.
nlohmann::json summarize(const RunRecord& record);

/// One CSV line per row (no header), as written by `append_rows_csv`.
std::vector<std::string> row_lines(const RunRecord& record);

/// Appends rows; the header is written when the file is new or empty.
void append_rows_csv(const std::filesystem::path& path, const RunRecord& record);

}  // namespace hdr
