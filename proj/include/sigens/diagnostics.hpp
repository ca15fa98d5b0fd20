#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sigens/construct.hpp"
#include "sigens/random.hpp"
#include "sigens/types.hpp"

namespace sigens {

// How sample loops run. Every sample i draws from rng.derive(i) and writes
// its own slot; reductions then run serially in index order, so serial and
// parallel runs agree bit for bit at any thread count.
struct Execution {
    enum class Mode { serial, parallel };
    Mode mode = Mode::parallel;
    int threads = 0; // 0 keeps the OpenMP default

    static Execution serial() { return {Mode::serial, 1}; }
    static Execution parallel(int threads = 0) { return {Mode::parallel, threads}; }
};

struct ScalarEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n_samples = 0;
};

struct VectorEstimate {
    std::vector<double> mean;
    std::vector<double> std_error;
    std::size_t n_samples = 0;
};

/// Sample mean and standard error of each column of a row-per-sample table.
VectorEstimate summarize(const std::vector<std::vector<double>>& samples);
ScalarEstimate summarize(std::span<const double> samples);

/// Element-wise mean of eigenvalue sets in raw coordinate order.
VectorEstimate mean_unordered_spectrum(std::size_t n, double sigma, std::size_t n_samples,
                                       const RandomStream& rng, Execution exec = {});

/// Element-wise mean of eigenvalue sets sorted descending.
VectorEstimate mean_ordered_spectrum(std::size_t n, double sigma, std::size_t n_samples,
                                     const RandomStream& rng, Execution exec = {});

/// Mean von Neumann entropy of sampled eigenvalue sets.
ScalarEstimate mean_sampled_entropy(std::size_t n, double sigma, std::size_t n_samples,
                                    const RandomStream& rng, Execution exec = {});

/// Mean entropy of the first `subsystem_sites` sites of Haar-random pure
/// states on `total_sites` sites (dense, so total_sites is capped at 14).
ScalarEstimate haar_state_entropy(int subsystem_sites, int total_sites, int local_dim, std::size_t n_samples,
                                  const RandomStream& rng, Execution exec = {});

struct RegressionReport {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 1.0;
    std::size_t points = 0;
};

/// Least squares of ln(lambda_i) on i = 1, 2, ... Entries at or below
/// `threshold` are skipped when threshold > 0; otherwise any nonpositive
/// entry is a domain error. Constant data gives slope 0 and R^2 = 1.
RegressionReport fit_log_spectrum(std::span<const double> mean_spectrum, double threshold = 0.0);

struct PhaseDiagramPoint {
    std::size_t n = 0;
    double sigma_critical = 0.0;
    double r_squared_min = 0.0;
    std::size_t index = 0;
    bool at_endpoint = false;
};

struct PhaseScan {
    std::vector<double> sigma;
    std::vector<RegressionReport> fits;
    PhaseDiagramPoint critical;
};

/// Grid minimizer of R^2; flags a minimum on either end of the grid.
PhaseDiagramPoint locate_r_squared_minimum(std::size_t n, std::span<const double> sigma_grid,
                                           std::span<const RegressionReport> fits);

/// Grid point k uses rng.derive(k) for its samples.
PhaseScan find_sigma_critical(std::size_t n, std::span<const double> sigma_grid, std::size_t n_samples,
                              const RandomStream& rng, Execution exec = {}, double threshold = 1e-16);

/// n log-spaced points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t n);

struct AdmissionReport {
    double epsilon = 0.0;
    std::size_t n_states = 0;
    double rate = 0.0;
    double std_error = 0.0;
    /// Mean per-bond error of each state; NaN where construction failed.
    std::vector<double> errors;
    std::size_t failures = 0;
    std::size_t converged = 0;
};

/// Builds n_states states, state i from rng.derive(i). Failed constructions
/// count as not admitted.
AdmissionReport admission_rate(const EnsembleSpec& spec, double epsilon, std::size_t n_states,
                               const RandomStream& rng, Execution exec = {}, const SweepOptions& options = {});

/// Surface over subsystem size l = 1 ... l_max (rows) and sigma (columns).
struct Surface {
    std::vector<int> l;
    std::vector<double> sigma;
    std::vector<std::vector<double>> mean;
    std::vector<std::vector<double>> std_error;
    std::size_t n_samples = 0;
};

/// Mean entropy of spectra drawn at n = d^l. Cell (l, k) uses rng.derive(l).derive(k).
Surface entropy_surface(int l_max, std::span<const double> sigma_grid, std::size_t n_samples,
                        const RandomStream& rng, Execution exec = {}, int local_dim = 2);

/// Mean count of eigenvalues above `trunc`, same sampling as entropy_surface.
Surface bond_dimension_surface(int l_max, std::span<const double> sigma_grid, double trunc, std::size_t n_samples,
                               const RandomStream& rng, Execution exec = {}, int local_dim = 2);

/// Largest deviation, in standard errors, of a series from its best
/// monotone (pool-adjacent-violators) fit weighted by 1/se^2.
double monotone_deviation(std::span<const double> values, std::span<const double> std_errors, bool increasing);

} // namespace sigens
