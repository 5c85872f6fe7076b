#include "hdr/density.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "hdr/error.hpp"
#include "hdr/kernels.hpp"
#include "hdr/sampling.hpp"

namespace hdr {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454836;
constexpr double kNormalizerTolerance = 1e-6;

void check_concentration(double kappa) {
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw DomainError("concentration must be finite and >= 0");
}

// Composite Simpson rule; `intervals` is rounded up to an even count.
template <class F>
double simpson(F&& f, double a, double b, std::size_t intervals) {
    if (intervals % 2) ++intervals;
    const double h = (b - a) / static_cast<double>(intervals);
    double s = f(a) + f(b);
    for (std::size_t i = 1; i < intervals; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + h * static_cast<double>(i));
    return s * h / 3.0;
}

double gaussian_log_norm_closed(double precision, int dim) {
    return 0.5 * dim * (std::log(precision) - kLogTwoPi);
}

double gaussian_log_norm_quadrature(double precision, int dim) {
    const double half_width = 12.0 / std::sqrt(precision);
    const double one = simpson([&](double x) { return std::exp(-0.5 * precision * x * x); }, -half_width, half_width, 4096);
    return -dim * std::log(one);
}

// Normalizers are computed by quadrature once per (kernel, precision, dim),
// checked against the closed form, and cached.
class NormalizerCache {
public:
    double get(KernelKind kind, double c, int dim) {
        const auto key = std::make_tuple(static_cast<int>(kind), c, dim);
        {
            std::lock_guard lock(mutex_);
            if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        }
        double quad = 0.0, closed = 0.0;
        switch (kind) {
            case KernelKind::VonMisesFisherS2:
                quad = vmf_log_norm_quadrature(c);
                closed = vmf_log_norm_closed(c);
                break;
            case KernelKind::VonMisesTorus:
                quad = dim * von_mises_log_norm_quadrature(c);
                closed = dim * von_mises_log_norm_closed(c);
                break;
            case KernelKind::GaussianEuclidean:
                quad = gaussian_log_norm_quadrature(c, dim);
                closed = gaussian_log_norm_closed(c, dim);
                break;
        }
        if (!(std::abs(std::expm1(quad - closed)) <= kNormalizerTolerance)) {
            throw std::logic_error("normalizer closed form disagrees with quadrature for " + kernel_name(kind) +
                                   " at precision " + std::to_string(c));
        }
        std::lock_guard lock(mutex_);
        cache_.emplace(key, quad);
        return quad;
    }

private:
    std::mutex mutex_;
    std::map<std::tuple<int, double, int>, double> cache_;
};

NormalizerCache& normalizers() {
    static NormalizerCache cache;
    return cache;
}

}  // namespace

// ---- kernel.hpp ------------------------------------------------------------

std::string kernel_name(KernelKind kind) {
    switch (kind) {
        case KernelKind::VonMisesFisherS2: return "vmf";
        case KernelKind::VonMisesTorus: return "von_mises";
        case KernelKind::GaussianEuclidean: return "gaussian";
    }
    return "?";
}

KernelKind kernel_from_name(const std::string& name) {
    if (name == "vmf") return KernelKind::VonMisesFisherS2;
    if (name == "von_mises" || name == "vm") return KernelKind::VonMisesTorus;
    if (name == "gaussian" || name == "gauss") return KernelKind::GaussianEuclidean;
    throw DomainError("unknown kernel '" + name + "'");
}

KernelKind default_kernel(const ManifoldKind& kind) {
    switch (kind.tag()) {
        case ManifoldKind::Tag::Sphere2: return KernelKind::VonMisesFisherS2;
        case ManifoldKind::Tag::Circle:
        case ManifoldKind::Tag::Torus: return KernelKind::VonMisesTorus;
        case ManifoldKind::Tag::Euclidean: return KernelKind::GaussianEuclidean;
    }
    return KernelKind::VonMisesFisherS2;
}

double KernelConfig::precision() const {
    return kind == KernelKind::GaussianEuclidean ? 1.0 / (parameter * parameter) : parameter;
}

void KernelConfig::validate() const {
    if (!(parameter > 0.0) || !std::isfinite(parameter)) {
        throw DomainError("kernel concentration/bandwidth must be finite and > 0");
    }
}

bool KernelConfig::matches(const ManifoldKind& m) const { return default_kernel(m) == kind; }

double kernel_exponent(KernelKind kind, std::span<const double> x, std::span<const double> y) {
    switch (kind) {
        case KernelKind::VonMisesFisherS2:
            return x[0] * y[0] + x[1] * y[1] + x[2] * y[2] - 1.0;
        case KernelKind::VonMisesTorus: {
            double s = 0.0;
            for (std::size_t k = 0; k < x.size(); ++k) s += std::cos(x[k] - y[k]) - 1.0;
            return s;
        }
        case KernelKind::GaussianEuclidean: {
            double s = 0.0;
            for (std::size_t k = 0; k < x.size(); ++k) s += (x[k] - y[k]) * (x[k] - y[k]);
            return -0.5 * s;
        }
    }
    return 0.0;
}

double kernel_log_norm(KernelKind kind, double precision, int dim) {
    if (kind == KernelKind::GaussianEuclidean && !(precision > 0.0)) throw DomainError("bandwidth must be > 0");
    check_concentration(precision);
    return normalizers().get(kind, precision, dim);
}

// ---- normalizing constants ---------------------------------------------------

double bessel_i0e(double x) {
    x = std::abs(x);
    if (x <= 30.0) {
        const double q = 0.25 * x * x;
        double term = 1.0, sum = 1.0;
        for (int k = 1; k < 500; ++k) {
            term *= q / (static_cast<double>(k) * static_cast<double>(k));
            sum += term;
            if (term < 1e-17 * sum) break;
        }
        return sum * std::exp(-x);
    }
    // Hankel asymptotic series, truncated at its smallest term.
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * x);
        if (next >= term) break;
        term = next;
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum / std::sqrt(kTwoPi * x);
}

double vmf_log_norm_closed(double kappa) {
    check_concentration(kappa);
    if (kappa < 1e-8) return -std::log(4.0 * kPi) + kappa;  // kappa / (1 - e^{-2 kappa}) ~ 1/2 + kappa/2
    return std::log(kappa) - kLogTwoPi - std::log(-std::expm1(-2.0 * kappa));
}

double vmf_log_norm_quadrature(double kappa) {
    check_concentration(kappa);
    double integral;
    if (kappa <= 1.0) {
        integral = kTwoPi * simpson([&](double t) { return std::exp(kappa * (t - 1.0)); }, -1.0, 1.0, 2048);
    } else {
        // u = kappa (1 - t); the integrand e^{-u} is negligible past u = 50
        const double upper = std::min(2.0 * kappa, 50.0);
        integral = kTwoPi / kappa * simpson([](double u) { return std::exp(-u); }, 0.0, upper, 4096);
    }
    return -std::log(integral);
}

double von_mises_log_norm_closed(double kappa) {
    check_concentration(kappa);
    return -kLogTwoPi - std::log(bessel_i0e(kappa));
}

double von_mises_log_norm_quadrature(double kappa) {
    check_concentration(kappa);
    // periodic trapezoid rule: geometric convergence for analytic integrands
    const auto nodes = static_cast<std::size_t>(256 + 64 * std::ceil(std::sqrt(kappa)));
    const double h = kTwoPi / static_cast<double>(nodes);
    double s = 0.0;
    for (std::size_t i = 0; i < nodes; ++i) s += std::exp(kappa * (std::cos(h * static_cast<double>(i)) - 1.0));
    return -std::log(s * h);
}

// ---- analytic densities --------------------------------------------------------

double vmf_pdf(std::span<const double> x, std::span<const double> mu, double kappa) {
    check_concentration(kappa);
    const double t = x[0] * mu[0] + x[1] * mu[1] + x[2] * mu[2];
    return std::exp(normalizers().get(KernelKind::VonMisesFisherS2, kappa, 2) + kappa * (t - 1.0));
}

double von_mises_torus_pdf(std::span<const double> x, std::span<const double> mus, std::span<const double> kappas) {
    if (x.size() != mus.size() || mus.size() != kappas.size()) throw DomainError("dimension mismatch in von Mises pdf");
    double log_p = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        check_concentration(kappas[k]);
        log_p += normalizers().get(KernelKind::VonMisesTorus, kappas[k], 1) + kappas[k] * (std::cos(x[k] - mus[k]) - 1.0);
    }
    return std::exp(log_p);
}

double gaussian_pdf(std::span<const double> x, std::span<const double> mean, double sigma) {
    if (!(sigma > 0.0)) throw DomainError("Gaussian scale must be > 0");
    if (x.size() != mean.size()) throw DomainError("dimension mismatch in Gaussian pdf");
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += (x[k] - mean[k]) * (x[k] - mean[k]);
    const double c = 1.0 / (sigma * sigma);
    return std::exp(gaussian_log_norm_closed(c, static_cast<int>(x.size())) - 0.5 * c * s);
}

AnalyticMixture::AnalyticMixture(ManifoldKind kind, std::vector<MixtureComponent> components)
    : kind_(kind), components_(std::move(components)) {
    if (components_.empty()) throw DomainError("mixture needs at least one component");
    double total = 0.0;
    for (auto& c : components_) {
        if (!(c.weight >= 0.0)) throw DomainError("mixture weights must be non-negative");
        total += c.weight;
        if (auto* v = std::get_if<VmfComponent>(&c.shape)) {
            if (kind_.tag() != ManifoldKind::Tag::Sphere2) throw DomainError("vMF component needs the sphere");
            check_concentration(v->kappa);
            canonicalize(kind_, v->mu);
        } else if (auto* t = std::get_if<VonMisesTorusComponent>(&c.shape)) {
            if (!kind_.is_angular() || t->mus.size() != kind_.coord_size() || t->kappas.size() != kind_.coord_size()) {
                throw DomainError("von Mises component does not match the torus dimension");
            }
            for (double k : t->kappas) check_concentration(k);
            canonicalize(kind_, t->mus);
        } else if (auto* g = std::get_if<GaussianComponent>(&c.shape)) {
            if (kind_.tag() != ManifoldKind::Tag::Euclidean || g->mean.size() != kind_.coord_size()) {
                throw DomainError("Gaussian component does not match the Euclidean dimension");
            }
            if (!(g->sigma > 0.0)) throw DomainError("Gaussian scale must be > 0");
        }
    }
    if (std::abs(total - 1.0) > 1e-9) throw DomainError("mixture weights must sum to 1");
}

double AnalyticMixture::evaluate(std::span<const double> x) const {
    double s = 0.0;
    for (const auto& c : components_) {
        if (c.weight == 0.0) continue;
        std::visit(
            [&](const auto& shape) {
                using T = std::decay_t<decltype(shape)>;
                if constexpr (std::is_same_v<T, VmfComponent>) s += c.weight * vmf_pdf(x, shape.mu, shape.kappa);
                else if constexpr (std::is_same_v<T, VonMisesTorusComponent>)
                    s += c.weight * von_mises_torus_pdf(x, shape.mus, shape.kappas);
                else s += c.weight * gaussian_pdf(x, shape.mean, shape.sigma);
            },
            c.shape);
    }
    return s;
}

PointCloud AnalyticMixture::sample(std::size_t n, std::uint64_t seed) const {
    std::vector<WeightedSampler> samplers;
    for (const auto& c : components_) {
        WeightedSampler ws{c.weight, {}};
        std::visit(
            [&](const auto& shape) {
                using T = std::decay_t<decltype(shape)>;
                if constexpr (std::is_same_v<T, VmfComponent>)
                    ws.draw = [shape](Rng& rng, PointCloud& out) { draw_vmf(shape.mu, shape.kappa, rng, out); };
                else if constexpr (std::is_same_v<T, VonMisesTorusComponent>)
                    ws.draw = [shape](Rng& rng, PointCloud& out) { draw_von_mises_torus(shape.mus, shape.kappas, rng, out); };
                else
                    ws.draw = [shape](Rng& rng, PointCloud& out) { draw_gaussian(shape.mean, shape.sigma, rng, out); };
            },
            c.shape);
        samplers.push_back(std::move(ws));
    }
    return sample_mixture(kind_, samplers, n, seed);
}

AnalyticMixture AnalyticMixture::two_vmf_benchmark(double kappa) {
    const double a = kPi / 6.0;
    VmfComponent first{{std::cos(-a), std::sin(-a), 0.0}, kappa};
    VmfComponent second{{std::cos(a) * std::cos(a), std::cos(a) * std::sin(a), std::sin(a)}, kappa};
    return AnalyticMixture(ManifoldKind::sphere2(), {{0.5, first}, {0.5, second}});
}

AnalyticMixture AnalyticMixture::uniform(const ManifoldKind& kind) {
    switch (kind.tag()) {
        case ManifoldKind::Tag::Sphere2: return AnalyticMixture(kind, {{1.0, VmfComponent{{0.0, 0.0, 1.0}, 0.0}}});
        case ManifoldKind::Tag::Circle:
        case ManifoldKind::Tag::Torus: {
            const std::size_t d = kind.coord_size();
            return AnalyticMixture(kind, {{1.0, VonMisesTorusComponent{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)}}});
        }
        case ManifoldKind::Tag::Euclidean: break;
    }
    throw DomainError("no uniform distribution on Euclidean space");
}

double mixture_pdf(std::span<const double> x, const AnalyticMixture& mixture) { return mixture.evaluate(x); }

// ---- kernel estimates --------------------------------------------------------

KernelEstimate::KernelEstimate(PointCloud sample, KernelConfig config)
    : sample_(std::move(sample)), config_(config), log_norm_(0.0) {
    if (sample_.empty()) throw DomainError("kernel estimate needs a non-empty sample");
    config_.validate();
    if (!config_.matches(sample_.kind())) {
        throw DomainError(kernel_name(config_.kind) + " kernel does not fit a " + sample_.kind().name() + " sample");
    }
    log_norm_ = kernel_log_norm(config_.kind, config_.precision(), sample_.kind().dim());
}

double KernelEstimate::evaluate(std::span<const double> x) const {
    const double c = config_.precision();
    double s = 0.0;
    for (std::size_t i = 0; i < sample_.size(); ++i) s += std::exp(c * kernel_exponent(config_.kind, x, sample_[i]));
    return std::exp(log_norm_) * s / static_cast<double>(sample_.size());
}

std::vector<double> KernelEstimate::evaluate(const PointCloud& queries) const {
    return kernels::kde(sample_, config_, queries);
}

double kde_evaluate(const PointCloud& sample, const KernelConfig& config, std::span<const double> x) {
    return KernelEstimate(sample, config).evaluate(x);
}

const ManifoldKind& DensityModel::kind() const {
    return is_analytic() ? analytic().kind() : kernel().sample().kind();
}

double DensityModel::evaluate(std::span<const double> x) const {
    return is_analytic() ? analytic().evaluate(x) : kernel().evaluate(x);
}

std::vector<double> DensityModel::evaluate(const PointCloud& points) const {
    if (!is_analytic()) return kernel().evaluate(points);
    std::vector<double> out(points.size());
    const auto& m = analytic();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(points.size()); ++i) out[i] = m.evaluate(points[i]);
    return out;
}

double integrate(const DensityModel& density, const Grid& grid) {
    if (!(density.kind() == grid.kind())) throw DomainError("density and grid live on different manifolds");
    const std::vector<double> values = density.evaluate(grid.nodes());
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) s += values[i] * grid.weights()[i];
    return s;
}

// ---- cross-validation --------------------------------------------------------

std::vector<double> log_spaced(double lo_exp2, double hi_exp2, std::size_t count) {
    if (count == 0) return {};
    if (count == 1) return {std::exp2(lo_exp2)};
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = std::exp2(lo_exp2 + (hi_exp2 - lo_exp2) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    return out;
}

CvResult cv_select(const PointCloud& sample, KernelKind kind, std::span<const double> candidates) {
    if (sample.size() < 2) throw DomainError("cross-validation needs at least two points");
    if (candidates.empty()) throw DomainError("empty candidate grid");
    std::vector<double> precision(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        KernelConfig{kind, candidates[i]}.validate();
        precision[i] = KernelConfig{kind, candidates[i]}.precision();
    }
    CvResult result;
    result.log_likelihood = kernels::loo_log_likelihood(sample, kind, precision);

    // smoothest first, so a strict comparison keeps the smoother of tied candidates
    std::vector<std::size_t> order(candidates.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return precision[a] < precision[b]; });

    double best = -HUGE_VAL;
    bool found = false;
    for (std::size_t i : order) {
        const double ll = result.log_likelihood[i];
        if (std::isfinite(ll) && (!found || ll > best)) {
            best = ll;
            result.parameter = candidates[i];
            found = true;
        }
    }
    if (!found) throw SelectionError("every leave-one-out likelihood is -inf or undefined");
    return result;
}

double cv_select_concentration(const PointCloud& sample, KernelKind kind, std::span<const double> candidates) {
    return cv_select(sample, kind, candidates).parameter;
}

// ---- serialization -----------------------------------------------------------

nlohmann::json to_json(const AnalyticMixture& m) {
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : m.components()) {
        nlohmann::json j{{"weight", c.weight}};
        std::visit(
            [&](const auto& shape) {
                using T = std::decay_t<decltype(shape)>;
                if constexpr (std::is_same_v<T, VmfComponent>) {
                    j["type"] = "vmf";
                    j["mu"] = shape.mu;
                    j["kappa"] = shape.kappa;
                } else if constexpr (std::is_same_v<T, VonMisesTorusComponent>) {
                    j["type"] = "von_mises";
                    j["mu"] = shape.mus;
                    j["kappa"] = shape.kappas;
                } else {
                    j["type"] = "gaussian";
                    j["mean"] = shape.mean;
                    j["sigma"] = shape.sigma;
                }
            },
            c.shape);
        comps.push_back(j);
    }
    return {{"kind", "analytic_mixture"}, {"manifold", m.kind().name()}, {"dim", m.kind().dim()}, {"components", comps}};
}

AnalyticMixture mixture_from_json(const nlohmann::json& j) {
    try {
        const ManifoldKind kind = ManifoldKind::from_name(j.at("manifold").get<std::string>(), j.value("dim", 2));
        std::vector<MixtureComponent> comps;
        for (const auto& c : j.at("components")) {
            MixtureComponent mc;
            mc.weight = c.value("weight", 1.0);
            const std::string type = c.at("type").get<std::string>();
            if (type == "vmf") {
                mc.shape = VmfComponent{c.at("mu").get<std::vector<double>>(), c.at("kappa").get<double>()};
            } else if (type == "von_mises") {
                std::vector<double> kappas;
                if (c.at("kappa").is_array()) kappas = c.at("kappa").get<std::vector<double>>();
                else kappas.assign(kind.coord_size(), c.at("kappa").get<double>());
                mc.shape = VonMisesTorusComponent{c.at("mu").get<std::vector<double>>(), kappas};
            } else if (type == "gaussian") {
                mc.shape = GaussianComponent{c.at("mean").get<std::vector<double>>(), c.at("sigma").get<double>()};
            } else {
                throw ConfigError("unknown mixture component type '" + type + "'");
            }
            comps.push_back(std::move(mc));
        }
        return AnalyticMixture(kind, std::move(comps));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad density description: ") + e.what());
    }
}

nlohmann::json to_json(const KernelConfig& k) {
    return {{"kind", "kernel_estimate"}, {"kernel", kernel_name(k.kind)}, {"parameter", k.parameter}};
}

KernelConfig kernel_config_from_json(const nlohmann::json& j) {
    try {
        KernelConfig k{kernel_from_name(j.at("kernel").get<std::string>()), j.at("parameter").get<double>()};
        k.validate();
        return k;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad kernel description: ") + e.what());
    }
}

}  // namespace hdr
