#pragma once

#include <vector>

#include "hawkes/types.hpp"

namespace hawkes {

/// 1-D conditional intensity mu + a * sum_{t_i < t} g(t - t_i).
/// Events at exactly t are excluded (intensity is left-continuous).
double intensity_1d(double mu, double a, const ExpKernel& kernel,
                    const std::vector<double>& event_times, double t);

/// Multivariate intensity lambda_u(t) = mu_u + sum_{i: t_i < t} A[u][u_i] g(t - t_i).
double intensity_mv(const HawkesParams& params, const EventSequence& seq,
                    std::size_t u, double t);

/// Closed-form compensator Lambda_u(t) = integral of lambda_u over [0, t].
double compensator(const HawkesParams& params, const EventSequence& seq,
                   std::size_t u, double t);

/// Log-likelihood over a list of sequences, evaluated with the O(n*U)
/// exponential-kernel recursion. Returns -infinity if some event sits at
/// zero intensity; throws only on malformed inputs.
double log_likelihood(const HawkesParams& params,
                      const std::vector<EventSequence>& sequences);
double log_likelihood(const HawkesParams& params, const EventSequence& seq);

/// Sum of singular values of A.
double nuclear_norm(const std::vector<std::vector<double>>& A);

/// Regularized objective -L + lambda1 ||A||_* + lambda2 ||A||_1.
double objective(const HawkesParams& params,
                 const std::vector<EventSequence>& sequences, double lambda1,
                 double lambda2);

/// Compensator increments between successive dimension-u events
/// (time-rescaling residuals; Exp(1) i.i.d. under the true model).
std::vector<double> rescaled_residuals(const HawkesParams& params,
                                       const EventSequence& seq,
                                       std::size_t u);

/// Spectral radius of the branching matrix (= A itself with a unit-mass
/// kernel). The process is subcritical iff the result is < 1.
double branching_spectral_radius(const std::vector<std::vector<double>>& A);

/// Per-event kernel sums shared by the likelihood recursion and the solver.
/// excitation[i][v] = sum_{j < i, u_j = v} exp(-omega (t_i - t_j)), and
/// tail[v] = sum_{u_j = v} (1 - exp(-omega (T - t_j))).
struct ExcitationIndex {
    std::vector<std::vector<double>> excitation;
    std::vector<double> tail;

    ExcitationIndex(const EventSequence& seq, std::size_t num_dims,
                    double omega);
};

}  // namespace hawkes
