#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include <json.hpp>

#include "hdr/grid.hpp"
#include "hdr/kernel.hpp"
#include "hdr/manifold.hpp"
#include "hdr/rng.hpp"

namespace hdr {

// ---- normalizing constants ------------------------------------------------

/// Exponentially scaled modified Bessel function e^{-x} I_0(x), x >= 0.
double bessel_i0e(double x);

/// S^2 vMF normalizer kappa / (4 pi sinh kappa), written to stay finite for
/// large kappa: returns log C(kappa) + kappa.
double vmf_log_norm_closed(double kappa);

/// Same constant by 1-D quadrature over t = <x, mu> (the pushforward of the
/// area measure is uniform on [-1, 1]).
double vmf_log_norm_quadrature(double kappa);

/// log of 1 / (2 pi I_0(kappa) e^{-kappa}) for one circle coordinate.
double von_mises_log_norm_closed(double kappa);
double von_mises_log_norm_quadrature(double kappa);

// ---- analytic densities ----------------------------------------------------

double vmf_pdf(std::span<const double> x, std::span<const double> mu, double kappa);
double von_mises_torus_pdf(std::span<const double> x, std::span<const double> mus, std::span<const double> kappas);
double gaussian_pdf(std::span<const double> x, std::span<const double> mean, double sigma);

struct VmfComponent {
    std::vector<double> mu;
    double kappa = 0.0;
};

struct VonMisesTorusComponent {
    std::vector<double> mus;
    std::vector<double> kappas;
};

struct GaussianComponent {
    std::vector<double> mean;
    double sigma = 1.0;
};

using ComponentShape = std::variant<VmfComponent, VonMisesTorusComponent, GaussianComponent>;

struct MixtureComponent {
    double weight = 1.0;
    ComponentShape shape;
};

/// Finite mixture of analytic densities on one manifold; samplable.
class AnalyticMixture {
public:
    AnalyticMixture(ManifoldKind kind, std::vector<MixtureComponent> components);

    const ManifoldKind& kind() const { return kind_; }
    const std::vector<MixtureComponent>& components() const { return components_; }

    double evaluate(std::span<const double> x) const;
    PointCloud sample(std::size_t n, std::uint64_t seed) const;

    /// Two equal-weight vMF(kappa = 10) components with means
    /// mu1 = (cos(-pi/6), sin(-pi/6), 0) and
    /// mu2 = (cos(pi/6)cos(pi/6), cos(pi/6)sin(pi/6), sin(pi/6)).
    static AnalyticMixture two_vmf_benchmark(double kappa = 10.0);

    static AnalyticMixture uniform(const ManifoldKind& kind);

private:
    ManifoldKind kind_;
    std::vector<MixtureComponent> components_;
};

double mixture_pdf(std::span<const double> x, const AnalyticMixture& mixture);

// ---- kernel estimates ------------------------------------------------------

/// f_n(x) = (1/n) sum_i K(x, X_i).
class KernelEstimate {
public:
    KernelEstimate(PointCloud sample, KernelConfig config);

    const PointCloud& sample() const { return sample_; }
    const KernelConfig& config() const { return config_; }

    double evaluate(std::span<const double> x) const;
    std::vector<double> evaluate(const PointCloud& queries) const;

private:
    PointCloud sample_;
    KernelConfig config_;
    double log_norm_;
};

/// Evaluable density: an analytic mixture or a kernel estimate.
class DensityModel {
public:
    DensityModel(AnalyticMixture m) : model_(std::move(m)) {}
    DensityModel(KernelEstimate k) : model_(std::move(k)) {}

    const ManifoldKind& kind() const;
    bool is_analytic() const { return std::holds_alternative<AnalyticMixture>(model_); }
    const AnalyticMixture& analytic() const { return std::get<AnalyticMixture>(model_); }
    const KernelEstimate& kernel() const { return std::get<KernelEstimate>(model_); }

    double evaluate(std::span<const double> x) const;
    std::vector<double> evaluate(const PointCloud& points) const;

private:
    std::variant<AnalyticMixture, KernelEstimate> model_;
};

double kde_evaluate(const PointCloud& sample, const KernelConfig& config, std::span<const double> x);

/// Sum of density * quadrature weight over the grid.
double integrate(const DensityModel& density, const Grid& grid);

// ---- cross-validation ------------------------------------------------------

/// Log-spaced grid 2^lo .. 2^hi with `count` points (default 2^0..2^10, 40 points).
std::vector<double> log_spaced(double lo_exp2 = 0.0, double hi_exp2 = 10.0, std::size_t count = 40);

struct CvResult {
    double parameter = 0.0;            ///< selected kappa or h
    std::vector<double> log_likelihood;  ///< aligned with the candidate grid
};

/// Leave-one-out likelihood cross-validation over `candidates` (kappa values,
/// or bandwidths for the Gaussian kernel). Ties go to the smoother candidate.
CvResult cv_select(const PointCloud& sample, KernelKind kind, std::span<const double> candidates);

double cv_select_concentration(const PointCloud& sample, KernelKind kind, std::span<const double> candidates);

// ---- serialization ---------------------------------------------------------

nlohmann::json to_json(const AnalyticMixture& m);
AnalyticMixture mixture_from_json(const nlohmann::json& j);
nlohmann::json to_json(const KernelConfig& k);
KernelConfig kernel_config_from_json(const nlohmann::json& j);

}  // namespace hdr
