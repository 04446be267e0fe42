#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "brf/core.hpp"
#include "brf/params.hpp"

namespace brf {

namespace detail {

/// Uniform draw on the open interval (0, 1), 53-bit resolution.
/// Built directly from the raw mt19937_64 stream so the byte-exact
/// reproducibility contract does not depend on library distribution
/// internals. Boundary draws are rejected.
inline double uniform_open01(std::mt19937_64& gen) {
    for (;;) {
        const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
        if (u > 0.0 && u < 1.0) return u;
    }
}

}  // namespace detail

/// A seeded batch of draws with its provenance.
struct SampleSet {
    std::vector<double> values;
    BrfParams params;
    std::uint64_t seed = 0;

    [[nodiscard]] std::size_t n() const { return values.size(); }
};

/// Inverse-transform sampling: u ~ U(0,1), x = rank_size(u). Regenerating
/// with the same seed reproduces the values bit-exactly.
inline SampleSet sample_x(const BrfParams& p, std::size_t n, std::uint64_t seed) {
    if (p.degenerate()) throw DegenerateError();
    if (n < 1) throw DomainError("sample size must be positive");
    SampleSet out{{}, p, seed};
    out.values.reserve(n);
    std::mt19937_64 gen(seed);
    for (std::size_t i = 0; i < n; ++i)
        out.values.push_back(rank_size(p, detail::uniform_open01(gen)));
    return out;
}

}  // namespace brf
