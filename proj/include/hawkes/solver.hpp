#pragma once

#include <cstdint>
#include <vector>

#include "hawkes/types.hpp"

namespace hawkes {

/// Solver settings. The penalization level C and mixing ratio rho map onto
/// the objective weights as lambda1 = C * rho (nuclear) and
/// lambda2 = C * (1 - rho) (L1).
struct FitConfig {
    double penalization{1000.0};
    double mixing_ratio{0.5};
    std::size_t max_iterations{50};
    double tolerance{1e-5};
    double omega{1.0};
    double admm_rho{0.1};
    std::uint64_t init_seed{0};
    bool fix_a_zero{false};   // freeze A at 0 and fit base rates only
    std::size_t num_dims{0};  // 0 = infer as max event dimension + 1

    double lambda1() const { return penalization * mixing_ratio; }
    double lambda2() const { return penalization * (1.0 - mixing_ratio); }

    void validate() const;
};

struct FitResult {
    HawkesParams params;
    std::vector<double> objective_trace;
    bool converged{false};
    std::size_t iterations_run{0};
};

/// Entrywise soft threshold clamped at zero: max(x - threshold, 0).
std::vector<std::vector<double>> prox_l1_nonneg(
    const std::vector<std::vector<double>>& X, double threshold);

/// Singular value thresholding: U max(S - threshold, 0) V^T.
std::vector<std::vector<double>> prox_nuclear(
    const std::vector<std::vector<double>>& X, double threshold);

/// True iff the last step of the trace changed by less than tolerance,
/// relative to max(|previous|, 1).
bool check_convergence(const std::vector<double>& trace, double tolerance);

/// Estimate (A, mu) at fixed decay by alternating minorization updates with
/// ADMM consensus on two auxiliary copies of A (nuclear and L1 prox).
/// The reported iterate is the best one seen by objective value; the trace
/// records the incumbent objective per iteration.
FitResult fit_adm4(const std::vector<EventSequence>& sequences,
                   const FitConfig& cfg);

/// Held-out log-likelihood grid search over candidate decay values.
/// Fits on train, scores on heldout, returns the best candidate's config.
double select_omega(const std::vector<EventSequence>& train,
                    const std::vector<EventSequence>& heldout,
                    const std::vector<double>& candidates,
                    const FitConfig& base_cfg);

}  // namespace hawkes
