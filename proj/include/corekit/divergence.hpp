#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>

#include "corekit/types.hpp"

namespace corekit {

enum class DivergenceKind {
    squared_euclidean,
    squared_mahalanobis,
    generalized_kl,
    itakura_saito,
};

std::string to_string(DivergenceKind kind);
DivergenceKind divergence_kind_from_string(const std::string& name);

// The companion squared Mahalanobis distance d_A and similarity constant mu
// that sandwich a divergence: mu * d_A(x,y) <= d(x,y) <= d_A(x,y) on the
// domain box. Three representations, cheapest wins:
//   scaled_identity : d_A = scale * ||x-y||^2
//   diagonal        : d_A = sum_j diag[j] (x_j-y_j)^2
//   dense           : d_A = ||L^T (x-y)||^2 with A = L L^T
struct MahalanobisCompanion {
    enum class Form { scaled_identity, diagonal, dense };
    Form form = Form::scaled_identity;
    double scale = 1.0;
    std::vector<double> diag;
    Matrix a;             // only for Form::dense
    Matrix chol_lower;    // Cholesky factor of a, computed once
    double mu_sim = 1.0;

    double operator()(std::span<const double> x, std::span<const double> y) const;
    bool is_diagonal() const { return form != Form::dense; }
    // Per-coordinate weight vector; valid when is_diagonal().
    double diag_entry(std::size_t j) const { return form == Form::scaled_identity ? scale : diag[j]; }
};

// Divergence descriptor: the clustering distance d(.,.), its companion
// squared Mahalanobis bound, the similarity constant, and (for the Bregman
// divergences with restricted domains) the per-coordinate box [lo, hi].
//
// Defaults for the box-restricted divergences, derived from second-derivative
// bounds of the Bregman generator on [lo, hi] and overridable:
//   generalized KL : A = I/(2*lo),    mu = lo/hi
//   Itakura-Saito  : A = I/(2*lo^2),  mu = (lo/hi)^2
class Divergence {
public:
    static Divergence squared_euclidean();
    // A must be symmetric positive definite (checked by Cholesky).
    static Divergence squared_mahalanobis(Matrix a);
    static Divergence generalized_kl(double lo, double hi);
    static Divergence itakura_saito(double lo, double hi);

    // Replaces the derived companion; a must be SPD, mu in (0, 1].
    Divergence& override_companion(Matrix a, double mu);

    DivergenceKind kind() const { return kind_; }
    bool has_domain_box() const { return has_box_; }
    double domain_lo() const { return lo_; }
    double domain_hi() const { return hi_; }
    double mu_sim() const { return companion_.mu_sim; }

    // d(x, y). Throws DomainError when a coordinate of x or y leaves the box.
    double operator()(std::span<const double> x, std::span<const double> y) const;

    // The companion distance d_A(x, y); what Algorithm-style samplers use in
    // place of d for the distance-to-mean masses.
    double companion_distance(std::span<const double> x, std::span<const double> y) const;

    const MahalanobisCompanion& companion() const { return companion_; }

    bool in_domain(double v) const { return !has_box_ || (v >= lo_ && v <= hi_); }

private:
    Divergence() = default;

    DivergenceKind kind_ = DivergenceKind::squared_euclidean;
    MahalanobisCompanion companion_;
    bool has_box_ = false;
    double lo_ = -std::numeric_limits<double>::infinity();
    double hi_ = std::numeric_limits<double>::infinity();
};

// mahalanobis_companion op: the (A, mu) pair behind a configured divergence.
inline const MahalanobisCompanion& mahalanobis_companion(const Divergence& div) {
    return div.companion();
}

// First out-of-domain entry of X under div, if any.
struct DomainReport {
    bool ok = true;
    std::size_t row = 0, column = 0;   // 1-based, meaningful when !ok
    double value = 0.0;
};

DomainReport validate_domain(const Divergence& div, const Dataset& x);

// Lower-triangular Cholesky factor of an SPD matrix; throws ConfigError when
// the matrix is not symmetric positive definite.
Matrix cholesky_lower(const Matrix& a);

}  // namespace corekit
