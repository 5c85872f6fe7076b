#pragma once

#include <span>
#include <string>

#include "hdr/manifold.hpp"

namespace hdr {

enum class KernelKind { VonMisesFisherS2, VonMisesTorus, GaussianEuclidean };

std::string kernel_name(KernelKind kind);
KernelKind kernel_from_name(const std::string& name);

/// The natural kernel for a manifold: vMF on S^2, von Mises product on tori,
/// Gaussian on R^d.
KernelKind default_kernel(const ManifoldKind& kind);

/// Kernel family plus its smoothing parameter: the concentration kappa for
/// the directional kernels, the bandwidth h for the Gaussian one.
struct KernelConfig {
    KernelKind kind = KernelKind::VonMisesFisherS2;
    double parameter = 1.0;

    static KernelConfig vmf(double kappa) { return {KernelKind::VonMisesFisherS2, kappa}; }
    static KernelConfig von_mises(double kappa) { return {KernelKind::VonMisesTorus, kappa}; }
    static KernelConfig gaussian(double h) { return {KernelKind::GaussianEuclidean, h}; }

    /// Coefficient multiplying `kernel_exponent`: kappa, or 1/h^2.
    double precision() const;

    /// Throws DomainError unless the parameter is finite and > 0.
    void validate() const;

    bool matches(const ManifoldKind& m) const;
};

/// Every kernel here is exp(log_norm(c) + c * s(x, y)) with s <= 0 and s = 0
/// at x = y, where c is the precision:
///   vMF        s = <x, y> - 1
///   von Mises  s = sum_k (cos(x_k - y_k) - 1)
///   Gaussian   s = -|x - y|^2 / 2
double kernel_exponent(KernelKind kind, std::span<const double> x, std::span<const double> y);

/// Log normalizing constant for precision c on a manifold of dimension dim.
/// Backed by a quadrature cache that cross-checks the closed form.
double kernel_log_norm(KernelKind kind, double precision, int dim);

}  // namespace hdr
