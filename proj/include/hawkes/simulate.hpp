#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hawkes/types.hpp"

namespace hawkes {

struct SimConfig {
    double horizon{100.0};
    std::uint64_t seed{0};
    std::size_t max_events{10'000'000};
};

/// Raised when the requested parameters are supercritical (rho(A) >= 1).
struct StabilityError : std::runtime_error {
    double spectral_radius;
    StabilityError(const std::string& what, double rho)
        : std::runtime_error(what), spectral_radius(rho) {}
};

/// Raised when a simulation exceeds max_events; carries the partial sample.
struct TruncationError : std::runtime_error {
    EventSequence partial;
    TruncationError(const std::string& what, EventSequence partial_)
        : std::runtime_error(what), partial(std::move(partial_)) {}
};

/// Exact sample via Ogata thinning, deterministic given cfg.seed.
/// The waiting-time and acceptance draws come from a mt19937_64 stream;
/// see README for the exact transform so runs reproduce across platforms.
EventSequence simulate(const HawkesParams& params, const SimConfig& cfg);

/// count independent sequences; sequence k is seeded by a splitmix64 mix
/// of (cfg.seed, k), so batches are reproducible and order-independent.
std::vector<EventSequence> simulate_batch(const HawkesParams& params,
                                          const SimConfig& cfg,
                                          std::size_t count);

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index);

}  // namespace hawkes
