#pragma once

#include <cstddef>
#include <vector>

namespace hawkes {

/// Exponential decay kernel g(t) = omega * exp(-omega * t), t >= 0.
/// Has unit mass, so infectivity entries read as expected child counts.
struct ExpKernel {
    double omega{1.0};

    explicit ExpKernel(double omega_);
    ExpKernel() = default;

    double operator()(double t) const;
    /// Integral of g over [0, t].
    double integral(double t) const;
};

/// One event of a U-dimensional point process.
struct Event {
    double time{0.0};
    std::size_t dim{0};
};

/// One realization of the process on [0, T], timestamps strictly increasing.
struct EventSequence {
    std::vector<Event> events;
    double horizon{0.0};

    EventSequence() = default;
    EventSequence(std::vector<Event> events_, double horizon_);

    std::size_t size() const { return events.size(); }
    bool empty() const { return events.empty(); }

    /// Throws std::invalid_argument on ordering/range violations.
    void validate(std::size_t num_dims) const;
};

/// Model state: base intensities, infectivity matrix, shared decay.
/// A is row = destination, column = source: A[u][v] is the expected number
/// of dimension-u events triggered by one dimension-v event.
struct HawkesParams {
    std::vector<double> mu;
    std::vector<std::vector<double>> A;
    ExpKernel kernel;

    HawkesParams() = default;
    HawkesParams(std::vector<double> mu_, std::vector<std::vector<double>> A_,
                 ExpKernel kernel_);

    std::size_t dims() const { return mu.size(); }
};

}  // namespace hawkes
