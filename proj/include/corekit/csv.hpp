#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "corekit/types.hpp"

namespace corekit {

// Plain numeric CSV, one point per row, no header row.
Dataset load_dataset(const std::string& path);
Dataset read_dataset(std::istream& in, const std::string& origin = "<stream>");
void save_dataset(const std::string& path, const Matrix& points);

// Weighted coreset CSV.  First line is a comment header of the form
//   # lwcs v1 n=<n> m=<m> seed=<seed>
// followed by one row per sample: coord1,...,coordD,weight.
struct CoresetFile {
    Coreset coreset;
    std::uint64_t source_n = 0;
    std::uint64_t m = 0;
    std::uint64_t seed = 0;
};

void save_coreset(const std::string& path, const Coreset& c,
                  std::uint64_t source_n, std::uint64_t seed);
CoresetFile load_coreset(const std::string& path);

// Centers are stored as a plain dataset so they can be reloaded with load_dataset.
void save_centers(const std::string& path, const CenterSet& centers);
CenterSet load_centers(const std::string& path);

std::string format_double(double v);

}  // namespace corekit
