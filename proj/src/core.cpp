#include "hawkes/core.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hawkes {

namespace {

constexpr double kIntensityFloor = 1e-300;

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        throw std::invalid_argument(std::string(what) + " must be finite");
    }
}

Eigen::MatrixXd to_eigen(const std::vector<std::vector<double>>& A) {
    const auto rows = static_cast<Eigen::Index>(A.size());
    const auto cols = rows > 0 ? static_cast<Eigen::Index>(A[0].size()) : 0;
    Eigen::MatrixXd M(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (static_cast<Eigen::Index>(A[i].size()) != cols) {
            throw std::invalid_argument("matrix rows have unequal lengths");
        }
        for (Eigen::Index j = 0; j < cols; ++j) {
            M(i, j) = A[i][j];
        }
    }
    return M;
}

}  // namespace

ExpKernel::ExpKernel(double omega_) : omega(omega_) {
    if (!std::isfinite(omega) || omega <= 0.0) {
        throw std::invalid_argument("ExpKernel: omega must be finite and > 0");
    }
}

double ExpKernel::operator()(double t) const {
    return t < 0.0 ? 0.0 : omega * std::exp(-omega * t);
}

double ExpKernel::integral(double t) const {
    return t <= 0.0 ? 0.0 : 1.0 - std::exp(-omega * t);
}

EventSequence::EventSequence(std::vector<Event> events_, double horizon_)
    : events(std::move(events_)), horizon(horizon_) {}

void EventSequence::validate(std::size_t num_dims) const {
    if (!std::isfinite(horizon) || horizon <= 0.0) {
        throw std::invalid_argument("EventSequence: horizon must be > 0");
    }
    double prev = -std::numeric_limits<double>::infinity();
    for (const Event& e : events) {
        if (!std::isfinite(e.time) || e.time < 0.0 || e.time > horizon) {
            throw std::invalid_argument(
                "EventSequence: event time outside [0, T]");
        }
        if (e.time <= prev) {
            throw std::invalid_argument(
                "EventSequence: timestamps must be strictly increasing");
        }
        if (e.dim >= num_dims) {
            throw std::invalid_argument(
                "EventSequence: event dimension out of range");
        }
        prev = e.time;
    }
}

HawkesParams::HawkesParams(std::vector<double> mu_,
                           std::vector<std::vector<double>> A_,
                           ExpKernel kernel_)
    : mu(std::move(mu_)), A(std::move(A_)), kernel(kernel_) {
    const std::size_t u = mu.size();
    if (u == 0) {
        throw std::invalid_argument("HawkesParams: at least one dimension");
    }
    if (A.size() != u) {
        throw std::invalid_argument("HawkesParams: A row count != dims");
    }
    for (const auto& row : A) {
        if (row.size() != u) {
            throw std::invalid_argument("HawkesParams: A column count != dims");
        }
        for (double v : row) {
            if (!std::isfinite(v) || v < 0.0) {
                throw std::invalid_argument(
                    "HawkesParams: A entries must be finite and >= 0");
            }
        }
    }
    for (double m : mu) {
        if (!std::isfinite(m) || m < 0.0) {
            throw std::invalid_argument(
                "HawkesParams: mu entries must be finite and >= 0");
        }
    }
}

double intensity_1d(double mu, double a, const ExpKernel& kernel,
                    const std::vector<double>& event_times, double t) {
    require_finite(t, "intensity_1d: t");
    if (mu < 0.0 || a < 0.0) {
        throw std::invalid_argument("intensity_1d: parameters must be >= 0");
    }
    double rate = mu;
    for (double ti : event_times) {
        if (ti >= t) {
            break;
        }
        rate += a * kernel(t - ti);
    }
    return rate;
}

double intensity_mv(const HawkesParams& params, const EventSequence& seq,
                    std::size_t u, double t) {
    if (u >= params.dims()) {
        throw std::invalid_argument("intensity_mv: dimension out of range");
    }
    require_finite(t, "intensity_mv: t");
    double rate = params.mu[u];
    for (const Event& e : seq.events) {
        if (e.time >= t) {
            break;
        }
        rate += params.A[u][e.dim] * params.kernel(t - e.time);
    }
    return rate;
}

double compensator(const HawkesParams& params, const EventSequence& seq,
                   std::size_t u, double t) {
    if (u >= params.dims()) {
        throw std::invalid_argument("compensator: dimension out of range");
    }
    if (!std::isfinite(t) || t < 0.0 || t > seq.horizon) {
        throw std::invalid_argument("compensator: t outside [0, T]");
    }
    double acc = params.mu[u] * t;
    for (const Event& e : seq.events) {
        if (e.time >= t) {
            break;
        }
        acc += params.A[u][e.dim] * params.kernel.integral(t - e.time);
    }
    return acc;
}

ExcitationIndex::ExcitationIndex(const EventSequence& seq,
                                 std::size_t num_dims, double omega)
    : excitation(seq.size(), std::vector<double>(num_dims, 0.0)),
      tail(num_dims, 0.0) {
    std::vector<double> state(num_dims, 0.0);
    double prev_time = 0.0;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const Event& e = seq.events[i];
        const double decay = std::exp(-omega * (e.time - prev_time));
        for (std::size_t v = 0; v < num_dims; ++v) {
            state[v] *= decay;
        }
        excitation[i] = state;
        state[e.dim] += 1.0;
        prev_time = e.time;
    }
    for (const Event& e : seq.events) {
        tail[e.dim] += 1.0 - std::exp(-omega * (seq.horizon - e.time));
    }
}

double log_likelihood(const HawkesParams& params, const EventSequence& seq) {
    const std::size_t u_count = params.dims();
    seq.validate(u_count);
    const double omega = params.kernel.omega;
    const ExcitationIndex index(seq, u_count, omega);

    double ll = 0.0;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const std::size_t u = seq.events[i].dim;
        double lam = params.mu[u];
        for (std::size_t v = 0; v < u_count; ++v) {
            lam += params.A[u][v] * omega * index.excitation[i][v];
        }
        if (lam < kIntensityFloor) {
            return -std::numeric_limits<double>::infinity();
        }
        ll += std::log(lam);
    }
    for (std::size_t u = 0; u < u_count; ++u) {
        double comp = params.mu[u] * seq.horizon;
        for (std::size_t v = 0; v < u_count; ++v) {
            comp += params.A[u][v] * index.tail[v];
        }
        ll -= comp;
    }
    return ll;
}

double log_likelihood(const HawkesParams& params,
                      const std::vector<EventSequence>& sequences) {
    double total = 0.0;
    for (const EventSequence& seq : sequences) {
        total += log_likelihood(params, seq);
    }
    return total;
}

double nuclear_norm(const std::vector<std::vector<double>>& A) {
    const Eigen::MatrixXd M = to_eigen(A);
    if (!M.allFinite()) {
        throw std::invalid_argument("nuclear_norm: non-finite entries");
    }
    if (M.size() == 0) {
        return 0.0;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    return svd.singularValues().sum();
}

double objective(const HawkesParams& params,
                 const std::vector<EventSequence>& sequences, double lambda1,
                 double lambda2) {
    if (lambda1 < 0.0 || lambda2 < 0.0) {
        throw std::invalid_argument("objective: penalty weights must be >= 0");
    }
    double value = -log_likelihood(params, sequences);
    if (lambda1 > 0.0) {
        value += lambda1 * nuclear_norm(params.A);
    }
    if (lambda2 > 0.0) {
        double l1 = 0.0;
        for (const auto& row : params.A) {
            for (double a : row) {
                l1 += std::abs(a);
            }
        }
        value += lambda2 * l1;
    }
    return value;
}

std::vector<double> rescaled_residuals(const HawkesParams& params,
                                       const EventSequence& seq,
                                       std::size_t u) {
    if (u >= params.dims()) {
        throw std::invalid_argument(
            "rescaled_residuals: dimension out of range");
    }
    seq.validate(params.dims());
    std::vector<double> residuals;
    double prev_comp = 0.0;
    for (const Event& e : seq.events) {
        if (e.dim != u) {
            continue;
        }
        const double comp = compensator(params, seq, u, e.time);
        residuals.push_back(comp - prev_comp);
        prev_comp = comp;
    }
    return residuals;
}

double branching_spectral_radius(const std::vector<std::vector<double>>& A) {
    const Eigen::MatrixXd M = to_eigen(A);
    if (M.size() == 0) {
        return 0.0;
    }
    if (M.rows() != M.cols()) {
        throw std::invalid_argument("branching_spectral_radius: matrix must be square");
    }
    const Eigen::EigenSolver<Eigen::MatrixXd> solver(M, false);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace hawkes
