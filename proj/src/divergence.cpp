#include "corekit/divergence.hpp"

#include <cmath>

namespace corekit {

std::string to_string(DivergenceKind kind) {
    switch (kind) {
        case DivergenceKind::squared_euclidean: return "squared_euclidean";
        case DivergenceKind::squared_mahalanobis: return "squared_mahalanobis";
        case DivergenceKind::generalized_kl: return "generalized_kl";
        case DivergenceKind::itakura_saito: return "itakura_saito";
    }
    return "unknown";
}

DivergenceKind divergence_kind_from_string(const std::string& name) {
    if (name == "squared_euclidean") return DivergenceKind::squared_euclidean;
    if (name == "squared_mahalanobis") return DivergenceKind::squared_mahalanobis;
    if (name == "generalized_kl") return DivergenceKind::generalized_kl;
    if (name == "itakura_saito") return DivergenceKind::itakura_saito;
    throw ConfigError("unknown divergence kind: " + name);
}

Matrix cholesky_lower(const Matrix& a) {
    const std::size_t d = a.rows();
    if (a.cols() != d) throw ConfigError("companion matrix A must be square");
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j)
            if (a(i, j) != a(j, i)) throw ConfigError("companion matrix A must be symmetric");

    Matrix l(d, d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            if (i == j) {
                if (s <= 0.0) throw ConfigError("companion matrix A is not positive definite");
                l(i, j) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
    return l;
}

double MahalanobisCompanion::operator()(std::span<const double> x, std::span<const double> y) const {
    switch (form) {
        case Form::scaled_identity: {
            double s = 0.0;
            for (std::size_t j = 0; j < x.size(); ++j) {
                const double t = x[j] - y[j];
                s += t * t;
            }
            return scale * s;
        }
        case Form::diagonal: {
            double s = 0.0;
            for (std::size_t j = 0; j < x.size(); ++j) {
                const double t = x[j] - y[j];
                s += diag[j] * t * t;
            }
            return s;
        }
        case Form::dense: {
            // (x-y)^T A (x-y) = ||L^T (x-y)||^2
            const std::size_t d = x.size();
            double s = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                double z = 0.0;
                for (std::size_t i = j; i < d; ++i) z += chol_lower(i, j) * (x[i] - y[i]);
                s += z * z;
            }
            return s;
        }
    }
    return 0.0;
}

Divergence Divergence::squared_euclidean() {
    Divergence div;
    div.kind_ = DivergenceKind::squared_euclidean;
    div.companion_.form = MahalanobisCompanion::Form::scaled_identity;
    div.companion_.scale = 1.0;
    div.companion_.mu_sim = 1.0;
    return div;
}

Divergence Divergence::squared_mahalanobis(Matrix a) {
    Divergence div;
    div.kind_ = DivergenceKind::squared_mahalanobis;
    bool diagonal = true;
    for (std::size_t i = 0; i < a.rows() && diagonal; ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j && a(i, j) != 0.0) { diagonal = false; break; }
    if (diagonal) {
        div.companion_.form = MahalanobisCompanion::Form::diagonal;
        div.companion_.diag.resize(a.rows());
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (a(i, i) <= 0.0) throw ConfigError("companion matrix A is not positive definite");
            div.companion_.diag[i] = a(i, i);
        }
    } else {
        div.companion_.form = MahalanobisCompanion::Form::dense;
        div.companion_.chol_lower = cholesky_lower(a);
    }
    div.companion_.a = std::move(a);
    div.companion_.mu_sim = 1.0;
    return div;
}

namespace {
void check_box(double lo, double hi) {
    if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi))
        throw ConfigError("domain box requires 0 < lo <= hi < inf");
}
}  // namespace

Divergence Divergence::generalized_kl(double lo, double hi) {
    check_box(lo, hi);
    Divergence div;
    div.kind_ = DivergenceKind::generalized_kl;
    div.has_box_ = true;
    div.lo_ = lo;
    div.hi_ = hi;
    div.companion_.form = MahalanobisCompanion::Form::scaled_identity;
    div.companion_.scale = 1.0 / (2.0 * lo);
    div.companion_.mu_sim = lo / hi;
    return div;
}

Divergence Divergence::itakura_saito(double lo, double hi) {
    check_box(lo, hi);
    Divergence div;
    div.kind_ = DivergenceKind::itakura_saito;
    div.has_box_ = true;
    div.lo_ = lo;
    div.hi_ = hi;
    div.companion_.form = MahalanobisCompanion::Form::scaled_identity;
    div.companion_.scale = 1.0 / (2.0 * lo * lo);
    div.companion_.mu_sim = (lo / hi) * (lo / hi);
    return div;
}

Divergence& Divergence::override_companion(Matrix a, double mu) {
    if (!(mu > 0.0) || mu > 1.0) throw ConfigError("mu_sim must lie in (0, 1]");
    companion_.form = MahalanobisCompanion::Form::dense;
    companion_.chol_lower = cholesky_lower(a);
    companion_.a = std::move(a);
    companion_.mu_sim = mu;
    return *this;
}

namespace {

void require_in_box(const Divergence& div, std::span<const double> v, const char* which) {
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (!div.in_domain(v[j]))
            throw DomainError(std::string(which) + " coordinate " + std::to_string(j + 1) +
                                  " = " + std::to_string(v[j]) + " outside domain box [" +
                                  std::to_string(div.domain_lo()) + ", " + std::to_string(div.domain_hi()) + "]",
                              j + 1, v[j]);
    }
}

}  // namespace

double Divergence::operator()(std::span<const double> x, std::span<const double> y) const {
    if (x.size() != y.size())
        throw std::invalid_argument("divergence_eval: dimension mismatch (" +
                                    std::to_string(x.size()) + " vs " + std::to_string(y.size()) + ")");
    switch (kind_) {
        case DivergenceKind::squared_euclidean: {
            double s = 0.0;
            for (std::size_t j = 0; j < x.size(); ++j) {
                const double t = x[j] - y[j];
                s += t * t;
            }
            return s;
        }
        case DivergenceKind::squared_mahalanobis:
            return companion_(x, y);
        case DivergenceKind::generalized_kl: {
            require_in_box(*this, x, "x");
            require_in_box(*this, y, "y");
            double s = 0.0;
            for (std::size_t j = 0; j < x.size(); ++j)
                s += x[j] * std::log(x[j] / y[j]) - x[j] + y[j];
            return s < 0.0 ? 0.0 : s;  // clamp transcendental roundoff at x == y
        }
        case DivergenceKind::itakura_saito: {
            require_in_box(*this, x, "x");
            require_in_box(*this, y, "y");
            double s = 0.0;
            for (std::size_t j = 0; j < x.size(); ++j) {
                const double r = x[j] / y[j];
                s += r - std::log(r) - 1.0;
            }
            return s < 0.0 ? 0.0 : s;
        }
    }
    return 0.0;
}

double Divergence::companion_distance(std::span<const double> x, std::span<const double> y) const {
    if (x.size() != y.size())
        throw std::invalid_argument("companion_distance: dimension mismatch");
    return companion_(x, y);
}

DomainReport validate_domain(const Divergence& div, const Dataset& x) {
    DomainReport rep;
    if (!div.has_domain_box()) return rep;
    for (std::size_t i = 0; i < x.n(); ++i) {
        const auto p = x.point(i);
        for (std::size_t j = 0; j < p.size(); ++j) {
            if (!div.in_domain(p[j])) {
                rep.ok = false;
                rep.row = i + 1;
                rep.column = j + 1;
                rep.value = p[j];
                return rep;
            }
        }
    }
    return rep;
}

}  // namespace corekit
