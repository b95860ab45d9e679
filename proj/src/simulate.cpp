#include "hawkes/simulate.hpp"

#include <cmath>
#include <random>
#include <string>

#include "hawkes/core.hpp"

namespace hawkes {

namespace {

// Uniform in (0, 1]; avoids log(0) in the exponential transform.
double uniform_open(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

double exponential(std::mt19937_64& rng, double rate) {
    return -std::log(uniform_open(rng)) / rate;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) {
    // splitmix64 finalizer over the combined words.
    std::uint64_t z = base_seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

EventSequence simulate(const HawkesParams& params, const SimConfig& cfg) {
    if (cfg.horizon <= 0.0 || cfg.max_events == 0) {
        throw std::invalid_argument("simulate: invalid SimConfig");
    }
    const double rho = branching_spectral_radius(params.A);
    if (rho >= 1.0) {
        throw StabilityError(
            "simulate: supercritical parameters, spectral radius " +
                std::to_string(rho),
            rho);
    }

    const std::size_t u_count = params.dims();
    const double omega = params.kernel.omega;
    std::mt19937_64 rng(cfg.seed);

    EventSequence seq;
    seq.horizon = cfg.horizon;

    // state[v] = sum over past dimension-v events of exp(-omega (t - t_j)).
    std::vector<double> state(u_count, 0.0);
    std::vector<double> lambda(u_count, 0.0);
    double t = 0.0;

    const auto decay_to = [&](double next_t) {
        const double decay = std::exp(-omega * (next_t - t));
        for (double& s : state) {
            s *= decay;
        }
        t = next_t;
    };
    const auto total_intensity = [&]() {
        double total = 0.0;
        for (std::size_t u = 0; u < u_count; ++u) {
            double lam = params.mu[u];
            for (std::size_t v = 0; v < u_count; ++v) {
                lam += params.A[u][v] * omega * state[v];
            }
            lambda[u] = lam;
            total += lam;
        }
        return total;
    };

    while (true) {
        // Upper bound at the current time; valid until the next event since
        // the exponential kernel only decays between events.
        const double bound = total_intensity();
        if (bound <= 0.0) {
            break;
        }
        double candidate = t + exponential(rng, bound);
        if (candidate <= t) {
            candidate = std::nextafter(t, cfg.horizon + 1.0);
        }
        if (candidate > cfg.horizon) {
            break;
        }
        decay_to(candidate);
        const double rate = total_intensity();
        if (uniform_open(rng) * bound <= rate) {
            // Attribute the event proportionally to the per-dimension rates.
            double pick = uniform_open(rng) * rate;
            std::size_t dim = u_count - 1;
            for (std::size_t u = 0; u < u_count; ++u) {
                pick -= lambda[u];
                if (pick <= 0.0) {
                    dim = u;
                    break;
                }
            }
            seq.events.push_back({candidate, dim});
            state[dim] += 1.0;
            if (seq.events.size() > cfg.max_events) {
                throw TruncationError(
                    "simulate: event count exceeded max_events",
                    std::move(seq));
            }
        }
    }
    return seq;
}

std::vector<EventSequence> simulate_batch(const HawkesParams& params,
                                          const SimConfig& cfg,
                                          std::size_t count) {
    std::vector<EventSequence> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        SimConfig derived = cfg;
        derived.seed = derive_seed(cfg.seed, k);
        out.push_back(simulate(params, derived));
    }
    return out;
}

}  // namespace hawkes
