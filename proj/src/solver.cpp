#include "hawkes/solver.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "hawkes/core.hpp"

namespace hawkes {

namespace {

using Matrix = std::vector<std::vector<double>>;

Matrix zeros(std::size_t n) {
    return Matrix(n, std::vector<double>(n, 0.0));
}

Eigen::MatrixXd to_eigen(const Matrix& A) {
    const auto n = static_cast<Eigen::Index>(A.size());
    const auto m = n > 0 ? static_cast<Eigen::Index>(A[0].size()) : 0;
    Eigen::MatrixXd M(n, m);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
            M(i, j) = A[i][j];
        }
    }
    return M;
}

Matrix from_eigen(const Eigen::MatrixXd& M) {
    Matrix A(M.rows(), std::vector<double>(M.cols()));
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            A[i][j] = M(i, j);
        }
    }
    return A;
}

/// Flattened per-event kernel sums over all sequences, computed once.
struct SufficientStats {
    std::size_t dims{0};
    double total_horizon{0.0};
    std::vector<std::size_t> event_dim;
    std::vector<std::vector<double>> kappa;  // omega-scaled excitation per event
    std::vector<double> counts;              // n_u
    std::vector<double> tail;                // sum of kernel integrals per source
};

SufficientStats build_stats(const std::vector<EventSequence>& sequences,
                            std::size_t dims, double omega) {
    SufficientStats s;
    s.dims = dims;
    s.counts.assign(dims, 0.0);
    s.tail.assign(dims, 0.0);
    for (const EventSequence& seq : sequences) {
        seq.validate(dims);
        s.total_horizon += seq.horizon;
        const ExcitationIndex index(seq, dims, omega);
        for (std::size_t i = 0; i < seq.size(); ++i) {
            s.event_dim.push_back(seq.events[i].dim);
            std::vector<double> row(dims);
            for (std::size_t v = 0; v < dims; ++v) {
                row[v] = omega * index.excitation[i][v];
            }
            s.kappa.push_back(std::move(row));
            s.counts[seq.events[i].dim] += 1.0;
        }
        for (std::size_t v = 0; v < dims; ++v) {
            s.tail[v] += index.tail[v];
        }
    }
    return s;
}

}  // namespace

void FitConfig::validate() const {
    if (penalization < 0.0 || !std::isfinite(penalization)) {
        throw std::invalid_argument("FitConfig: penalization must be >= 0");
    }
    if (mixing_ratio < 0.0 || mixing_ratio > 1.0) {
        throw std::invalid_argument("FitConfig: mixing ratio must be in [0,1]");
    }
    if (max_iterations == 0) {
        throw std::invalid_argument("FitConfig: max_iterations must be >= 1");
    }
    if (tolerance <= 0.0) {
        throw std::invalid_argument("FitConfig: tolerance must be > 0");
    }
    if (omega <= 0.0 || !std::isfinite(omega)) {
        throw std::invalid_argument("FitConfig: omega must be > 0");
    }
    if (admm_rho <= 0.0) {
        throw std::invalid_argument("FitConfig: admm_rho must be > 0");
    }
}

Matrix prox_l1_nonneg(const Matrix& X, double threshold) {
    if (threshold < 0.0) {
        throw std::invalid_argument("prox_l1_nonneg: threshold must be >= 0");
    }
    Matrix out = X;
    for (auto& row : out) {
        for (double& x : row) {
            x = std::max(x - threshold, 0.0);
        }
    }
    return out;
}

Matrix prox_nuclear(const Matrix& X, double threshold) {
    if (threshold < 0.0) {
        throw std::invalid_argument("prox_nuclear: threshold must be >= 0");
    }
    const Eigen::MatrixXd M = to_eigen(X);
    if (!M.allFinite()) {
        throw std::runtime_error("prox_nuclear: non-finite input");
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(
        M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::VectorXd sv = svd.singularValues();
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        sv(i) = std::max(sv(i) - threshold, 0.0);
    }
    return from_eigen(svd.matrixU() * sv.asDiagonal() *
                      svd.matrixV().transpose());
}

bool check_convergence(const std::vector<double>& trace, double tolerance) {
    if (trace.empty()) {
        throw std::invalid_argument("check_convergence: empty trace");
    }
    if (trace.size() < 2) {
        return false;
    }
    const double prev = trace[trace.size() - 2];
    const double cur = trace.back();
    return std::abs(cur - prev) / std::max(std::abs(prev), 1.0) < tolerance;
}

FitResult fit_adm4(const std::vector<EventSequence>& sequences,
                   const FitConfig& cfg) {
    cfg.validate();
    std::size_t dims = cfg.num_dims;
    std::size_t total_events = 0;
    for (const EventSequence& seq : sequences) {
        for (const Event& e : seq.events) {
            dims = std::max(dims, e.dim + 1);
        }
        total_events += seq.size();
    }
    if (sequences.empty() || total_events == 0) {
        throw std::invalid_argument("fit_adm4: no events to fit");
    }

    const SufficientStats stats = build_stats(sequences, dims, cfg.omega);
    const double lambda1 = cfg.lambda1();
    const double lambda2 = cfg.lambda2();
    // The consensus penalty tracks the regularization scale, otherwise the
    // dual variables cannot reach equilibrium within the iteration budget.
    const double rho = cfg.admm_rho * std::max(1.0, cfg.penalization);

    // Method-of-moments Poisson rates; A starts at one shared uniform(0, 0.1)
    // draw so initialization commutes with dimension relabeling.
    std::vector<double> mu(dims);
    for (std::size_t u = 0; u < dims; ++u) {
        mu[u] = stats.counts[u] / stats.total_horizon;
    }
    std::mt19937_64 rng(cfg.init_seed);
    const double a_init =
        cfg.fix_a_zero
            ? 0.0
            : 0.1 * ((static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53);
    Matrix A(dims, std::vector<double>(dims, a_init));
    Matrix Z1 = A, Z2 = A;
    Matrix U1 = zeros(dims), U2 = zeros(dims);

    const auto eval_objective = [&](const Matrix& a_mat,
                                    const std::vector<double>& mu_vec) {
        return objective(HawkesParams(mu_vec, a_mat, ExpKernel(cfg.omega)),
                         sequences, lambda1, lambda2);
    };

    FitResult result;
    double best_obj = eval_objective(A, mu);
    Matrix best_A = A;
    std::vector<double> best_mu = mu;

    std::vector<double> mu_mass(dims);
    Matrix resp(dims, std::vector<double>(dims, 0.0));

    for (std::size_t iter = 0; iter < cfg.max_iterations; ++iter) {
        // Minorization pass: split each event's intensity into base-rate and
        // per-source responsibilities under the current parameters.
        std::fill(mu_mass.begin(), mu_mass.end(), 0.0);
        for (auto& row : resp) {
            std::fill(row.begin(), row.end(), 0.0);
        }
        for (std::size_t i = 0; i < stats.event_dim.size(); ++i) {
            const std::size_t u = stats.event_dim[i];
            double lam = mu[u];
            for (std::size_t v = 0; v < dims; ++v) {
                lam += A[u][v] * stats.kappa[i][v];
            }
            if (lam < 1e-300) {
                continue;  // zero-rate event, leave responsibilities at 0
            }
            mu_mass[u] += mu[u] / lam;
            for (std::size_t v = 0; v < dims; ++v) {
                resp[u][v] += A[u][v] * stats.kappa[i][v] / lam;
            }
        }

        for (std::size_t u = 0; u < dims; ++u) {
            mu[u] = mu_mass[u] / stats.total_horizon;
        }
        if (!cfg.fix_a_zero) {
            // Surrogate stationarity per entry: 2*rho*a^2 + b*a - resp = 0,
            // positive root keeps a >= 0.
            for (std::size_t u = 0; u < dims; ++u) {
                for (std::size_t v = 0; v < dims; ++v) {
                    const double b =
                        stats.tail[v] -
                        rho * (Z1[u][v] - U1[u][v] + Z2[u][v] - U2[u][v]);
                    const double p = resp[u][v];
                    A[u][v] =
                        (-b + std::sqrt(b * b + 8.0 * rho * p)) / (4.0 * rho);
                }
            }

            Matrix W1 = A, W2 = A;
            for (std::size_t u = 0; u < dims; ++u) {
                for (std::size_t v = 0; v < dims; ++v) {
                    W1[u][v] += U1[u][v];
                    W2[u][v] += U2[u][v];
                }
            }
            Z1 = prox_nuclear(W1, lambda1 / rho);
            Z2 = prox_l1_nonneg(W2, lambda2 / rho);
            for (std::size_t u = 0; u < dims; ++u) {
                for (std::size_t v = 0; v < dims; ++v) {
                    U1[u][v] += A[u][v] - Z1[u][v];
                    U2[u][v] += A[u][v] - Z2[u][v];
                }
            }
        }

        const double obj = eval_objective(A, mu);
        if (!std::isfinite(obj)) {
            throw std::runtime_error("fit_adm4: non-finite objective at iteration " +
                                     std::to_string(iter + 1));
        }
        if (obj <= best_obj) {  // ties go to the later iterate
            best_obj = obj;
            best_A = A;
            best_mu = mu;
        }
        result.objective_trace.push_back(best_obj);
        result.iterations_run = iter + 1;
        if (check_convergence(result.objective_trace, cfg.tolerance)) {
            result.converged = true;
            break;
        }
    }

    result.params = HawkesParams(best_mu, best_A, ExpKernel(cfg.omega));
    return result;
}

double select_omega(const std::vector<EventSequence>& train,
                    const std::vector<EventSequence>& heldout,
                    const std::vector<double>& candidates,
                    const FitConfig& base_cfg) {
    if (candidates.empty()) {
        throw std::invalid_argument("select_omega: no candidates");
    }
    double best_omega = candidates.front();
    double best_score = -std::numeric_limits<double>::infinity();
    for (double omega : candidates) {
        FitConfig cfg = base_cfg;
        cfg.omega = omega;
        const FitResult fit = fit_adm4(train, cfg);
        const double score = log_likelihood(fit.params, heldout);
        if (score > best_score) {
            best_score = score;
            best_omega = omega;
        }
    }
    return best_omega;
}

}  // namespace hawkes
