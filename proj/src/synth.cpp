#include "corekit/synth.hpp"

#include <cmath>
#include <stdexcept>

#include "corekit/rng.hpp"

namespace corekit {

GeneratorSpec standard_gaussian(std::size_t dim) {
    GeneratorSpec spec;
    spec.kind = GeneratorSpec::Kind::gaussian_mixture;
    spec.dim = dim;
    spec.components.push_back({std::vector<double>(dim, 0.0), 1.0, 1.0});
    return spec;
}

GeneratorSpec contaminated_gaussian(std::size_t dim, double fraction, double distance) {
    if (!(fraction >= 0.0) || fraction >= 1.0)
        throw ConfigError("contamination fraction must lie in [0, 1)");
    GeneratorSpec spec;
    spec.kind = GeneratorSpec::Kind::heavy_tail_contaminated;
    spec.dim = dim;
    spec.contamination_fraction = fraction;
    spec.contamination_distance = distance;
    return spec;
}

GeneratorSpec generator_from_string(const std::string& name, std::size_t dim) {
    if (name == "gaussian") return standard_gaussian(dim);
    if (name == "contaminated") return contaminated_gaussian(dim, 0.01, 100.0);
    throw ConfigError("unknown generator: " + name + " (expected gaussian|contaminated)");
}

bool finite_fourth_moment(const GeneratorSpec& spec) {
    if (spec.kind == GeneratorSpec::Kind::gaussian_mixture) return true;
    return spec.tail_exponent == 0.0 || spec.tail_exponent > 4.0;
}

namespace {

void validate(const GeneratorSpec& spec) {
    if (spec.dim == 0) throw ConfigError("generator dimension must be >= 1");
    if (spec.kind == GeneratorSpec::Kind::gaussian_mixture) {
        if (spec.components.empty()) throw ConfigError("gaussian mixture needs components");
        double total = 0.0;
        for (const auto& c : spec.components) {
            if (c.mean.size() != spec.dim) throw ConfigError("component mean dimension mismatch");
            if (!(c.weight > 0.0)) throw ConfigError("component weights must be positive");
            if (!(c.sigma >= 0.0)) throw ConfigError("component sigma must be nonnegative");
            total += c.weight;
        }
        if (!(total > 0.0)) throw ConfigError("component weights must be positive");
    } else {
        if (!(spec.contamination_fraction >= 0.0) || spec.contamination_fraction >= 1.0)
            throw ConfigError("contamination fraction must lie in [0, 1)");
        if (!(spec.tail_exponent >= 0.0)) throw ConfigError("tail exponent must be nonnegative");
    }
}

}  // namespace

Dataset sample_dataset(const GeneratorSpec& spec, std::size_t n, std::uint64_t seed) {
    validate(spec);
    const std::size_t d = spec.dim;
    RandomStream select(seed, stream_tag("synth/select"));
    RandomStream g1(seed, stream_tag("synth/gauss_u1"));
    RandomStream g2(seed, stream_tag("synth/gauss_u2"));
    RandomStream tail(seed, stream_tag("synth/tail"));

    Matrix points(n, d);
    if (spec.kind == GeneratorSpec::Kind::gaussian_mixture) {
        double total = 0.0;
        for (const auto& c : spec.components) total += c.weight;
        for (std::size_t i = 0; i < n; ++i) {
            const double u = select.uniform_at(i) * total;
            std::size_t pick = 0;
            double acc = spec.components[0].weight;
            while (pick + 1 < spec.components.size() && u >= acc)
                acc += spec.components[++pick].weight;
            const GaussianComponent& c = spec.components[pick];
            for (std::size_t j = 0; j < d; ++j)
                points(i, j) = c.mean[j] + c.sigma * gaussian_at(g1, g2, i * d + j);
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const bool far = select.uniform_at(i) < spec.contamination_fraction;
            double offset = 0.0;
            double sigma = 1.0;
            if (far) {
                double radius = spec.contamination_distance;
                if (spec.tail_exponent > 0.0)
                    radius *= std::pow(tail.uniform_open_at(i), -1.0 / spec.tail_exponent);
                offset = radius;
                sigma = spec.contamination_sigma;
            }
            for (std::size_t j = 0; j < d; ++j)
                points(i, j) = (j == 0 ? offset : 0.0) + sigma * gaussian_at(g1, g2, i * d + j);
        }
    }
    return Dataset{std::move(points)};
}

}  // namespace corekit
