#ifndef CHEAPBOOT_RESAMPLE_HPP
#define CHEAPBOOT_RESAMPLE_HPP

#include <cstddef>
#include <vector>

#include "cheapboot/rng.hpp"
#include "cheapboot/sample.hpp"

namespace cheapboot {

// n i.i.d. uniform draws from {0, ..., n-1} on the stream keyed by `seed`.
// Identical inputs give identical output on every platform and at any
// level of caller parallelism.
std::vector<std::size_t> draw_indices(std::size_t n, const SeedSpec& seed);

// With-replacement resample of the rows (and paired response, if present):
// output row i is input row indices[i] with indices from draw_indices.
EmpiricalSample resample(const EmpiricalSample& sample, const SeedSpec& seed);

// Per-source with-replacement resample; source j uses the stream
// (seed with source = j), so sources are mutually independent and a single
// source can be redrawn without touching the others.
MultiSourceSample resample_multi(const MultiSourceSample& sample, const SeedSpec& seed);

}  // namespace cheapboot

#endif
