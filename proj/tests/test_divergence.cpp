#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "corekit/divergence.hpp"

using namespace corekit;

namespace {

Matrix matrix_from(const std::vector<std::vector<double>>& rows) {
    Matrix m;
    for (const auto& r : rows) m.push_row(r);
    return m;
}

std::vector<double> random_box_point(std::mt19937_64& gen, std::size_t d, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> p(d);
    for (auto& v : p) v = u(gen);
    return p;
}

}  // namespace

TEST_CASE("divergence of a point with itself is zero") {
    std::mt19937_64 gen(7);
    const Divergence divs[] = {
        Divergence::squared_euclidean(),
        Divergence::squared_mahalanobis(matrix_from({{2, 0}, {0, 1}})),
        Divergence::generalized_kl(0.25, 4.0),
        Divergence::itakura_saito(0.25, 4.0),
    };
    for (const Divergence& div : divs) {
        const auto p = random_box_point(gen, 2, 0.3, 3.9);
        CHECK(div(p, p) == 0.0);
    }
}

TEST_CASE("divergence values match hand evaluation") {
    const Divergence maha = Divergence::squared_mahalanobis(matrix_from({{2, 0}, {0, 1}}));
    CHECK(maha(std::vector<double>{1, 0}, std::vector<double>{0, 0}) == 2.0);

    const Divergence dense = Divergence::squared_mahalanobis(matrix_from({{2, 1}, {1, 2}}));
    CHECK(dense(std::vector<double>{1, 1}, std::vector<double>{0, 0}) ==
          doctest::Approx(6.0).epsilon(1e-12));

    const Divergence kl = Divergence::generalized_kl(0.1, 10.0);
    CHECK(kl(std::vector<double>{2, 1}, std::vector<double>{1, 1}) ==
          doctest::Approx(2.0 * std::log(2.0) - 1.0).epsilon(1e-12));

    const Divergence is = Divergence::itakura_saito(0.1, 10.0);
    CHECK(is(std::vector<double>{2}, std::vector<double>{1}) ==
          doctest::Approx(1.0 - std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("dense mahalanobis equals the quadratic form") {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const std::size_t d = 4;
    Matrix m(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) m(i, j) = u(gen);
    Matrix a(d, d, 0.0);  // a = m^T m + 0.1 I, SPD
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            for (std::size_t t = 0; t < d; ++t) a(i, j) += m(t, i) * m(t, j);
            if (i == j) a(i, j) += 0.1;
        }
    const Divergence div = Divergence::squared_mahalanobis(a);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x(d), y(d);
        for (std::size_t j = 0; j < d; ++j) {
            x[j] = u(gen);
            y[j] = u(gen);
        }
        double direct = 0.0;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) direct += (x[i] - y[i]) * a(i, j) * (x[j] - y[j]);
        CHECK(div(x, y) == doctest::Approx(direct).epsilon(1e-10));
    }
}

TEST_CASE("cholesky factor matches hand arithmetic and rejects bad input") {
    const Matrix l = cholesky_lower(matrix_from({{4, 2}, {2, 3}}));
    CHECK(l(0, 0) == doctest::Approx(2.0));
    CHECK(l(1, 0) == doctest::Approx(1.0));
    CHECK(l(1, 1) == doctest::Approx(std::sqrt(2.0)));
    CHECK(l(0, 1) == 0.0);

    CHECK_THROWS_AS(cholesky_lower(matrix_from({{1, 2}, {3, 4}})), ConfigError);   // asymmetric
    CHECK_THROWS_AS(cholesky_lower(matrix_from({{1, 0}, {0, -1}})), ConfigError);  // not PD
    CHECK_THROWS_AS(Divergence::squared_mahalanobis(matrix_from({{0, 0}, {0, 0}})), ConfigError);
}

TEST_CASE("derived companions follow the domain box") {
    const Divergence euclid = Divergence::squared_euclidean();
    CHECK(euclid.mu_sim() == 1.0);
    const std::vector<double> x{1.0, 2.0}, y{0.5, 3.5};
    const double sq = 0.25 + 2.25;
    CHECK(euclid.companion_distance(x, y) == doctest::Approx(sq).epsilon(1e-15));

    const Divergence kl = Divergence::generalized_kl(0.5, 4.0);
    CHECK(kl.mu_sim() == doctest::Approx(0.5 / 4.0));
    CHECK(kl.companion_distance(x, y) == doctest::Approx(sq / (2.0 * 0.5)).epsilon(1e-15));

    const Divergence is = Divergence::itakura_saito(0.5, 4.0);
    CHECK(is.mu_sim() == doctest::Approx(0.25 / 16.0));
    CHECK(is.companion_distance(x, y) == doctest::Approx(sq / (2.0 * 0.25)).epsilon(1e-15));
}

TEST_CASE("mu-similarity sandwich holds on random domain pairs") {
    std::mt19937_64 gen(23);
    for (const auto kind : {DivergenceKind::generalized_kl, DivergenceKind::itakura_saito}) {
        const double lo = 0.3, hi = 3.0;
        const Divergence div = kind == DivergenceKind::generalized_kl
                                   ? Divergence::generalized_kl(lo, hi)
                                   : Divergence::itakura_saito(lo, hi);
        const double mu = div.mu_sim();
        for (int trial = 0; trial < 10000; ++trial) {
            const auto x = random_box_point(gen, 3, lo, hi);
            const auto y = random_box_point(gen, 3, lo, hi);
            const double dphi = div(x, y);
            const double da = div.companion_distance(x, y);
            CHECK(dphi >= 0.0);
            CHECK(mu * da <= dphi * (1.0 + 1e-12) + 1e-12);
            CHECK(dphi <= da * (1.0 + 1e-12) + 1e-12);
        }
    }
}

TEST_CASE("companion override replaces the derived pair") {
    Divergence kl = Divergence::generalized_kl(0.5, 2.0);
    kl.override_companion(matrix_from({{3, 0}, {0, 5}}), 0.2);
    CHECK(kl.mu_sim() == 0.2);
    const std::vector<double> x{1.0, 1.0}, y{0.5, 1.5};
    CHECK(kl.companion_distance(x, y) == doctest::Approx(3 * 0.25 + 5 * 0.25).epsilon(1e-15));

    CHECK_THROWS_AS(Divergence::generalized_kl(0.5, 2.0).override_companion(
                        matrix_from({{1, 0}, {0, 1}}), 0.0),
                    ConfigError);
    CHECK_THROWS_AS(Divergence::generalized_kl(0.5, 2.0).override_companion(
                        matrix_from({{1, 0}, {0, 1}}), 1.5),
                    ConfigError);
}

TEST_CASE("domain box construction is validated") {
    CHECK_THROWS_AS(Divergence::generalized_kl(0.0, 2.0), ConfigError);
    CHECK_THROWS_AS(Divergence::generalized_kl(-1.0, 2.0), ConfigError);
    CHECK_THROWS_AS(Divergence::generalized_kl(3.0, 2.0), ConfigError);
    CHECK_THROWS_AS(Divergence::itakura_saito(0.5,
                                              std::numeric_limits<double>::infinity()),
                    ConfigError);
}

TEST_CASE("domain violations are reported with their coordinate") {
    const Divergence kl = Divergence::generalized_kl(0.1, 10.0);
    try {
        kl(std::vector<double>{1.0, 0.0}, std::vector<double>{1.0, 1.0});
        CHECK(false);
    } catch (const DomainError& e) {
        CHECK(e.coordinate == 2);
        CHECK(e.value == 0.0);
    }

    Dataset x;
    x.points.push_row(std::vector<double>{1.0, 1.0});
    x.points.push_row(std::vector<double>{0.0, 1.0});
    const DomainReport report = validate_domain(kl, x);
    CHECK_FALSE(report.ok);
    CHECK(report.row == 2);
    CHECK(report.column == 1);
    CHECK(report.value == 0.0);

    Dataset ones;
    ones.points.push_row(std::vector<double>{1.0, 1.0});
    CHECK(validate_domain(Divergence::itakura_saito(0.5, 2.0), ones).ok);
    CHECK(validate_domain(Divergence::squared_euclidean(), x).ok);
}

TEST_CASE("weighted mean minimizes the Bregman cost (grid search)") {
    const std::vector<double> xs{0.6, 1.2, 2.5};
    const std::vector<double> ws{1.0, 2.0, 0.5};
    double wsum = 0.0, wxsum = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        wsum += ws[i];
        wxsum += ws[i] * xs[i];
    }
    const double mean = wxsum / wsum;

    for (const auto kind : {DivergenceKind::generalized_kl, DivergenceKind::itakura_saito}) {
        const Divergence div = kind == DivergenceKind::generalized_kl
                                   ? Divergence::generalized_kl(0.5, 4.0)
                                   : Divergence::itakura_saito(0.5, 4.0);
        auto cost_at = [&](double c) {
            double total = 0.0;
            for (std::size_t i = 0; i < xs.size(); ++i)
                total += ws[i] * div(std::vector<double>{xs[i]}, std::vector<double>{c});
            return total;
        };
        const double step = 1e-3;
        double best_c = 0.5, best = cost_at(0.5);
        for (double c = 0.5; c <= 4.0; c += step) {
            const double v = cost_at(c);
            if (v < best) {
                best = v;
                best_c = c;
            }
        }
        CHECK(std::abs(best_c - mean) <= step + 1e-12);
        CHECK(cost_at(mean) <= best + 1e-12);
    }
}

TEST_CASE("divergence kinds round-trip through their names") {
    for (const auto kind :
         {DivergenceKind::squared_euclidean, DivergenceKind::squared_mahalanobis,
          DivergenceKind::generalized_kl, DivergenceKind::itakura_saito})
        CHECK(divergence_kind_from_string(to_string(kind)) == kind);
    CHECK_THROWS_AS(divergence_kind_from_string("cosine"), ConfigError);
}
