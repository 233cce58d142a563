#pragma once

#include <cstdint>
#include <cstddef>
#include <string>
#include <vector>

#include "corekit/types.hpp"

namespace corekit {

struct GaussianComponent {
    std::vector<double> mean;
    double sigma = 1.0;
    double weight = 1.0;
};

// Data-generating distribution P for the statistical experiments. Sampling is
// counter-addressed: point i depends only on (seed, i).
struct GeneratorSpec {
    enum class Kind { gaussian_mixture, heavy_tail_contaminated };
    Kind kind = Kind::gaussian_mixture;
    std::size_t dim = 1;

    // gaussian_mixture
    std::vector<GaussianComponent> components;

    // heavy_tail_contaminated: standard-normal bulk plus a far blob along the
    // first axis. tail_exponent > 0 stretches the blob radius by a Pareto
    // factor u^(-1/alpha); the fourth moment is then finite only for alpha > 4.
    double contamination_fraction = 0.01;
    double contamination_distance = 100.0;
    double contamination_sigma = 1.0;
    double tail_exponent = 0.0;
};

GeneratorSpec standard_gaussian(std::size_t dim);
GeneratorSpec contaminated_gaussian(std::size_t dim, double fraction, double distance);
GeneratorSpec generator_from_string(const std::string& name, std::size_t dim);

bool finite_fourth_moment(const GeneratorSpec& spec);

Dataset sample_dataset(const GeneratorSpec& spec, std::size_t n, std::uint64_t seed);

}  // namespace corekit
