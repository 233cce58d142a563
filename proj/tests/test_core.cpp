#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "corekit/accumulate.hpp"
#include "corekit/core.hpp"
#include "corekit/csv.hpp"
#include "corekit/divergence.hpp"

#include "util.hpp"

using namespace corekit;

namespace {

Dataset make_dataset(const std::vector<std::vector<double>>& rows) {
    Dataset x;
    for (const auto& r : rows) x.points.push_row(r);
    return x;
}

CenterSet make_centers(const std::vector<std::vector<double>>& rows) {
    CenterSet q;
    for (const auto& r : rows) q.centers.push_row(r);
    return q;
}

Dataset random_dataset(std::size_t n, std::size_t d, unsigned tag) {
    std::mt19937_64 gen(tag);
    std::normal_distribution<double> dist(0.0, 2.0);
    Dataset x;
    x.points = Matrix(n, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) x.points(i, j) = dist(gen);
    return x;
}

const Divergence kEuclid = Divergence::squared_euclidean();

}  // namespace

TEST_CASE("csv ingestion parses well-formed files") {
    const auto dir = testutil::scratch_dir("corekit_test_csv");

    testutil::write_file(dir / "col.csv", "0\n0\n3\n");
    const Dataset a = load_dataset((dir / "col.csv").string());
    CHECK(a.n() == 3);
    CHECK(a.dim() == 1);
    CHECK(a.points(2, 0) == 3.0);

    testutil::write_file(dir / "grid.csv", "1,2\n3,4\n");
    const Dataset b = load_dataset((dir / "grid.csv").string());
    CHECK(b.n() == 2);
    CHECK(b.dim() == 2);
    CHECK(b.points(1, 1) == 4.0);

    testutil::write_file(dir / "crlf.csv", "1,2\r\n3,4\r\n");
    const Dataset c = load_dataset((dir / "crlf.csv").string());
    CHECK(c.points == b.points);
}

TEST_CASE("csv ingestion reports row and column of failures") {
    const auto dir = testutil::scratch_dir("corekit_test_csv_err");

    testutil::write_file(dir / "ragged.csv", "1,2\n3\n");
    CHECK_THROWS_AS(load_dataset((dir / "ragged.csv").string()), ParseError);
    try {
        load_dataset((dir / "ragged.csv").string());
    } catch (const ParseError& e) {
        CHECK(e.row == 2);
    }

    testutil::write_file(dir / "empty.csv", "");
    CHECK_THROWS_AS(load_dataset((dir / "empty.csv").string()), ParseError);

    testutil::write_file(dir / "alpha.csv", "1,x\n");
    try {
        load_dataset((dir / "alpha.csv").string());
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.row == 1);
        CHECK(e.column == 2);
    }

    CHECK_THROWS_AS(load_dataset((dir / "missing.csv").string()), ParseError);
}

TEST_CASE("dataset and coreset csv round-trip bit-exactly") {
    const auto dir = testutil::scratch_dir("corekit_test_csv_rt");
    const Dataset x = random_dataset(17, 3, 11);

    save_dataset((dir / "x.csv").string(), x.points);
    CHECK(load_dataset((dir / "x.csv").string()).points == x.points);

    Coreset c;
    c.points = x.points;
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.0, 4.0);
    for (std::size_t i = 0; i < x.n(); ++i) c.weights.push_back(u(gen));
    save_coreset((dir / "c.csv").string(), c, 1234, 99);

    const CoresetFile file = load_coreset((dir / "c.csv").string());
    CHECK(file.source_n == 1234);
    CHECK(file.m == 17);
    CHECK(file.seed == 99);
    CHECK(file.coreset.points == c.points);
    CHECK(file.coreset.weights == c.weights);
}

TEST_CASE("coreset csv stores the weight in the final column") {
    const auto dir = testutil::scratch_dir("corekit_test_csv_w");
    testutil::write_file(dir / "c.csv", "# lwcs v1 n=5 m=2 seed=9\n1,2,0.5\n3,4,1.5\n");
    const CoresetFile file = load_coreset((dir / "c.csv").string());
    CHECK(file.coreset.points(0, 0) == 1.0);
    CHECK(file.coreset.points(0, 1) == 2.0);
    CHECK(file.coreset.weights == std::vector<double>{0.5, 1.5});

    testutil::write_file(dir / "bad_header.csv", "# other v1 n=5 m=1 seed=9\n1,2,0.5\n");
    CHECK_THROWS_AS(load_coreset((dir / "bad_header.csv").string()), ParseError);

    testutil::write_file(dir / "short.csv", "# lwcs v1 n=5 m=3 seed=9\n1,2,0.5\n");
    CHECK_THROWS_AS(load_coreset((dir / "short.csv").string()), ParseError);
}

TEST_CASE("format_double survives a parse round-trip") {
    for (const double v : {0.1, 1.0 / 3.0, 1e-300, 12345.6789, -7.25, 0.0}) {
        const std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
}

TEST_CASE("dataset_mean matches hand arithmetic") {
    CHECK(dataset_mean(make_dataset({{0}, {0}, {3}})) == std::vector<double>{1.0});
    CHECK(dataset_mean(make_dataset({{2, -1}, {-2, 1}})) == std::vector<double>{0.0, 0.0});
    CHECK(dataset_mean(make_dataset({{1, 2}})) == std::vector<double>{1.0, 2.0});

    Coreset c;
    c.points.push_row(std::vector<double>{0.0});
    c.points.push_row(std::vector<double>{3.0});
    c.weights = {2.0, 1.0};
    CHECK(dataset_mean(c) == std::vector<double>{1.0});
}

TEST_CASE("quantization_error matches hand arithmetic") {
    const Dataset x = make_dataset({{0}, {0}, {3}});
    CHECK(quantization_error(x, make_centers({{0}}), kEuclid) == 9.0);
    CHECK(quantization_error(x, make_centers({{0}, {3}}), kEuclid) == 0.0);

    Coreset c;
    c.points.push_row(std::vector<double>{0.0});
    c.points.push_row(std::vector<double>{3.0});
    c.weights = {2.0, 1.0};
    CHECK(quantization_error(c, make_centers({{1}}), kEuclid) == 6.0);

    CHECK_THROWS_AS(quantization_error(x, make_centers({{0, 0}}), kEuclid),
                    std::invalid_argument);
}

TEST_CASE("unit-weight coreset cost equals dataset cost exactly") {
    const Dataset x = random_dataset(97, 3, 21);
    Coreset c;
    c.points = x.points;
    c.weights.assign(x.n(), 1.0);
    const CenterSet q{random_dataset(4, 3, 22).points};
    CHECK(quantization_error(c, q, kEuclid) == quantization_error(x, q, kEuclid));
}

TEST_CASE("zero-weight entries contribute nothing") {
    Coreset with, without;
    without.points.push_row(std::vector<double>{1.0, 1.0});
    without.weights = {2.5};
    with.points = without.points;
    with.points.push_row(std::vector<double>{9.0, -4.0});
    with.weights = {2.5, 0.0};
    const CenterSet q = make_centers({{0, 0}});
    CHECK(quantization_error(with, q, kEuclid) == quantization_error(without, q, kEuclid));
}

TEST_CASE("central_cost matches hand arithmetic") {
    CHECK(central_cost(make_dataset({{0}, {0}, {3}}), kEuclid) == 6.0);
    CHECK(central_cost(make_dataset({{4, 4}, {4, 4}, {4, 4}}), kEuclid) == 0.0);
    CHECK(central_cost(make_dataset({{-1}, {1}}), kEuclid) == 2.0);
}

TEST_CASE("assign_points picks nearest center, ties to lowest index") {
    CHECK(assign_points(make_dataset({{0}, {3}}), make_centers({{0}, {3}}), kEuclid) ==
          std::vector<std::size_t>{0, 1});
    CHECK(assign_points(make_dataset({{1.5}}), make_centers({{0}, {3}}), kEuclid) ==
          std::vector<std::size_t>{0});
    CHECK(assign_points(make_dataset({{0}, {0}, {3}}), make_centers({{0.5}, {2.5}}), kEuclid) ==
          std::vector<std::size_t>{0, 0, 1});
}

TEST_CASE("assignment costs re-sum to quantization_error exactly") {
    const Dataset x = random_dataset(300, 4, 31);
    const CenterSet q{random_dataset(5, 4, 32).points};
    const std::vector<std::size_t> labels = assign_points(x, q, kEuclid);
    const double resummed = block_sum(x.n(), [&](std::size_t i) {
        return kEuclid(x.point(i), q.centers.row(labels[i]));
    });
    CHECK(resummed == quantization_error(x, q, kEuclid));
}

TEST_CASE("quantization_error is monotone under center-set inclusion") {
    const Dataset x = random_dataset(120, 3, 41);
    const Matrix extra = random_dataset(3, 3, 42).points;
    CenterSet small{Matrix(0, 3)}, large{Matrix(0, 3)};
    small.centers.push_row(extra.row(0));
    small.centers.push_row(extra.row(1));
    large.centers = small.centers;
    large.centers.push_row(extra.row(2));
    CHECK(quantization_error(x, large, kEuclid) <= quantization_error(x, small, kEuclid));
}

TEST_CASE("bias-variance identity for a single center") {
    const Dataset x = random_dataset(100, 3, 51);
    const std::vector<double> mu = dataset_mean(x);
    const double phi_mean = central_cost(x, kEuclid);
    std::mt19937_64 gen(52);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> c(3);
        double shift = 0.0;
        for (std::size_t j = 0; j < 3; ++j) {
            c[j] = u(gen);
            shift += (c[j] - mu[j]) * (c[j] - mu[j]);
        }
        const double lhs = quantization_error(x, CenterSet{[&] {
                                                  Matrix m(0, 3);
                                                  m.push_row(c);
                                                  return m;
                                              }()},
                                              kEuclid);
        const double rhs = phi_mean + static_cast<double>(x.n()) * shift;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
}

TEST_CASE("dataset_stats agrees with the direct operations") {
    const Dataset x = random_dataset(257, 4, 61);
    const DatasetStats stats = dataset_stats(x, kEuclid);
    CHECK(stats.mean == dataset_mean(x));
    CHECK(stats.central_cost ==
          doctest::Approx(central_cost(x, kEuclid)).epsilon(1e-12));
}

TEST_CASE("reductions are independent of the worker-thread cap") {
    const Dataset x = random_dataset(5000, 3, 71);
    const CenterSet q{random_dataset(7, 3, 72).points};
    set_max_threads(1);
    const double phi1 = quantization_error(x, q, kEuclid);
    const std::vector<double> mean1 = dataset_mean(x);
    set_max_threads(4);
    CHECK(quantization_error(x, q, kEuclid) == phi1);
    CHECK(dataset_mean(x) == mean1);
    set_max_threads(1);
}
