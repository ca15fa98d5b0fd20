#include "sigens/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include <omp.h>

#include "sigens/linalg.hpp"
#include "sigens/mps.hpp"
#include "sigens/oracles.hpp"
#include "sigens/sphere.hpp"

namespace sigens {

namespace {

// Runs body(i) for i in [0, n). Exceptions escaping a parallel region would
// terminate, so the first one is captured and rethrown afterwards.
void for_each_sample(std::size_t n, const Execution& exec, const std::function<void(std::size_t)>& body)
{
    if (exec.mode == Execution::Mode::serial) {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }
    const int threads = exec.threads > 0 ? exec.threads : omp_get_max_threads();
    std::exception_ptr failure;
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (long long i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(sigens_sample_failure)
            if (!failure)
                failure = std::current_exception();
        }
    }
    if (failure)
        std::rethrow_exception(failure);
}

void require_samples(std::size_t n_samples)
{
    if (n_samples < 1)
        throw Error(ErrorKind::invalid_input, "need at least one sample");
}

template <typename Fn>
std::vector<std::vector<double>> draw_rows(std::size_t n_samples, const RandomStream& rng, const Execution& exec,
                                           Fn&& draw)
{
    require_samples(n_samples);
    std::vector<std::vector<double>> rows(n_samples);
    for_each_sample(n_samples, exec, [&](std::size_t i) {
        RandomStream sub = rng.derive(i);
        rows[i] = draw(sub);
    });
    return rows;
}

template <typename Fn>
std::vector<double> draw_scalars(std::size_t n_samples, const RandomStream& rng, const Execution& exec, Fn&& draw)
{
    require_samples(n_samples);
    std::vector<double> values(n_samples);
    for_each_sample(n_samples, exec, [&](std::size_t i) {
        RandomStream sub = rng.derive(i);
        values[i] = draw(sub);
    });
    return values;
}

std::vector<double> sorted_descending(std::vector<double> v)
{
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
}

Surface surface_over(int l_max, std::span<const double> sigma_grid, std::size_t n_samples, const RandomStream& rng,
                     const Execution& exec, int local_dim, const std::function<double(const EigenvalueSet&)>& stat)
{
    if (l_max < 1)
        throw Error(ErrorKind::invalid_input, "l_max must be >= 1");
    if (local_dim < 2)
        throw Error(ErrorKind::invalid_input, "local dimension must be >= 2");
    require_samples(n_samples);
    Surface out;
    out.sigma.assign(sigma_grid.begin(), sigma_grid.end());
    out.n_samples = n_samples;
    for (int l = 1; l <= l_max; ++l) {
        std::size_t n = 1;
        for (int i = 0; i < l; ++i)
            n *= static_cast<std::size_t>(local_dim);
        out.l.push_back(l);
        std::vector<double> row_mean, row_se;
        const RandomStream row_rng = rng.derive(static_cast<std::uint64_t>(l));
        for (std::size_t k = 0; k < sigma_grid.size(); ++k) {
            const double sigma = sigma_grid[k];
            const auto values = draw_scalars(n_samples, row_rng.derive(k), exec, [&](RandomStream& sub) {
                return stat(sample_eigenvalues(n, sigma, sub));
            });
            const ScalarEstimate est = summarize(values);
            row_mean.push_back(est.mean);
            row_se.push_back(est.std_error);
        }
        out.mean.push_back(std::move(row_mean));
        out.std_error.push_back(std::move(row_se));
    }
    return out;
}

} // namespace

VectorEstimate summarize(const std::vector<std::vector<double>>& samples)
{
    VectorEstimate out;
    out.n_samples = samples.size();
    if (samples.empty())
        return out;
    const std::size_t width = samples.front().size();
    out.mean.assign(width, 0.0);
    out.std_error.assign(width, 0.0);
    for (const auto& row : samples)
        for (std::size_t j = 0; j < width; ++j)
            out.mean[j] += row[j];
    const double n = static_cast<double>(samples.size());
    for (auto& v : out.mean)
        v /= n;
    if (samples.size() > 1) {
        for (const auto& row : samples)
            for (std::size_t j = 0; j < width; ++j) {
                const double dev = row[j] - out.mean[j];
                out.std_error[j] += dev * dev;
            }
        for (auto& v : out.std_error)
            v = std::sqrt(v / (n - 1.0) / n);
    }
    return out;
}

ScalarEstimate summarize(std::span<const double> samples)
{
    ScalarEstimate out;
    out.n_samples = samples.size();
    if (samples.empty())
        return out;
    const double n = static_cast<double>(samples.size());
    out.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
    if (samples.size() > 1) {
        double ss = 0.0;
        for (double v : samples)
            ss += (v - out.mean) * (v - out.mean);
        out.std_error = std::sqrt(ss / (n - 1.0) / n);
    }
    return out;
}

VectorEstimate mean_unordered_spectrum(std::size_t n, double sigma, std::size_t n_samples, const RandomStream& rng,
                                       Execution exec)
{
    return summarize(draw_rows(n_samples, rng, exec,
                               [&](RandomStream& sub) { return sample_eigenvalues(n, sigma, sub).lambda; }));
}

VectorEstimate mean_ordered_spectrum(std::size_t n, double sigma, std::size_t n_samples, const RandomStream& rng,
                                     Execution exec)
{
    return summarize(draw_rows(n_samples, rng, exec, [&](RandomStream& sub) {
        return sorted_descending(sample_eigenvalues(n, sigma, sub).lambda);
    }));
}

ScalarEstimate mean_sampled_entropy(std::size_t n, double sigma, std::size_t n_samples, const RandomStream& rng,
                                    Execution exec)
{
    const auto values = draw_scalars(n_samples, rng, exec, [&](RandomStream& sub) {
        return oracles::von_neumann_entropy(sample_eigenvalues(n, sigma, sub));
    });
    return summarize(values);
}

ScalarEstimate haar_state_entropy(int subsystem_sites, int total_sites, int local_dim, std::size_t n_samples,
                                  const RandomStream& rng, Execution exec)
{
    if (total_sites > kMaxStatevectorSites)
        throw Error(ErrorKind::capacity, "dense Haar states are limited to " + std::to_string(kMaxStatevectorSites) +
                                             " sites");
    if (subsystem_sites < 1 || subsystem_sites >= total_sites)
        throw Error(ErrorKind::invalid_bipartition, "subsystem must be a proper part of the chain");
    Eigen::Index dim = 1;
    for (int i = 0; i < total_sites; ++i)
        dim *= local_dim;
    const auto values = draw_scalars(n_samples, rng, exec, [&](RandomStream& sub) {
        const ComplexVector v = haar_random_isometry(dim, 1, sub).col(0);
        const SchmidtSpectrum s = dense_spectrum(v, total_sites, local_dim, subsystem_sites);
        return oracles::von_neumann_entropy(s.eigenvalues());
    });
    return summarize(values);
}

RegressionReport fit_log_spectrum(std::span<const double> mean_spectrum, double threshold)
{
    std::vector<double> x, y;
    for (std::size_t i = 0; i < mean_spectrum.size(); ++i) {
        const double v = mean_spectrum[i];
        if (std::isnan(v) || v < 0.0 || (threshold <= 0.0 && v == 0.0))
            throw Error(ErrorKind::domain, "log fit needs positive entries, entry " + std::to_string(i + 1) + " is " +
                                               std::to_string(v));
        if (threshold > 0.0 && v <= threshold)
            continue;
        x.push_back(static_cast<double>(i + 1));
        y.push_back(std::log(v));
    }
    if (x.size() < 2)
        throw Error(ErrorKind::domain, "log fit needs at least two usable points");

    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    RegressionReport out;
    out.points = x.size();
    if (syy == 0.0) {
        out.slope = 0.0;
        out.intercept = my;
        out.r_squared = 1.0;
        return out;
    }
    out.slope = sxy / sxx;
    out.intercept = my - out.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (out.intercept + out.slope * x[i]);
        ss_res += r * r;
    }
    out.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    return out;
}

PhaseDiagramPoint locate_r_squared_minimum(std::size_t n, std::span<const double> sigma_grid,
                                           std::span<const RegressionReport> fits)
{
    if (sigma_grid.size() < 3)
        throw Error(ErrorKind::invalid_input, "sigma grid needs at least 3 points");
    if (fits.size() != sigma_grid.size())
        throw Error(ErrorKind::invalid_input, "one fit per grid point expected");
    std::size_t best = 0;
    for (std::size_t k = 1; k < fits.size(); ++k)
        if (fits[k].r_squared < fits[best].r_squared)
            best = k;
    PhaseDiagramPoint p;
    p.n = n;
    p.index = best;
    p.sigma_critical = sigma_grid[best];
    p.r_squared_min = fits[best].r_squared;
    p.at_endpoint = best == 0 || best + 1 == fits.size();
    return p;
}

PhaseScan find_sigma_critical(std::size_t n, std::span<const double> sigma_grid, std::size_t n_samples,
                              const RandomStream& rng, Execution exec, double threshold)
{
    if (sigma_grid.size() < 3)
        throw Error(ErrorKind::invalid_input, "sigma grid needs at least 3 points");
    if (!std::is_sorted(sigma_grid.begin(), sigma_grid.end()) || !(sigma_grid.front() > 0.0))
        throw Error(ErrorKind::invalid_input, "sigma grid must be ascending and positive");
    PhaseScan scan;
    scan.sigma.assign(sigma_grid.begin(), sigma_grid.end());
    for (std::size_t k = 0; k < sigma_grid.size(); ++k) {
        const VectorEstimate mean = mean_ordered_spectrum(n, sigma_grid[k], n_samples, rng.derive(k), exec);
        scan.fits.push_back(fit_log_spectrum(mean.mean, threshold));
    }
    scan.critical = locate_r_squared_minimum(n, scan.sigma, scan.fits);
    return scan;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n)
{
    if (!(lo > 0.0) || !(hi >= lo) || n < 1)
        throw Error(ErrorKind::invalid_input, "log grid needs 0 < lo <= hi and n >= 1");
    std::vector<double> g(n);
    if (n == 1) {
        g[0] = lo;
        return g;
    }
    const double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

AdmissionReport admission_rate(const EnsembleSpec& spec, double epsilon, std::size_t n_states,
                               const RandomStream& rng, Execution exec, const SweepOptions& options)
{
    spec.validate();
    require_samples(n_states);
    AdmissionReport out;
    out.epsilon = epsilon;
    out.n_states = n_states;
    out.errors.assign(n_states, std::numeric_limits<double>::quiet_NaN());
    std::vector<char> converged(n_states, 0);
    for_each_sample(n_states, exec, [&](std::size_t i) {
        try {
            const ConstructionReport r = build_state(spec, rng.derive(i), options);
            out.errors[i] = r.total_error;
            converged[i] = r.converged ? 1 : 0;
        } catch (const Error&) {
            // stays NaN: counted as a failure and never admitted
        }
    });
    std::size_t admitted = 0;
    for (std::size_t i = 0; i < n_states; ++i) {
        const double e = out.errors[i];
        if (std::isnan(e))
            ++out.failures;
        else if (e < epsilon)
            ++admitted;
        out.converged += static_cast<std::size_t>(converged[i]);
    }
    const double n = static_cast<double>(n_states);
    out.rate = static_cast<double>(admitted) / n;
    out.std_error = std::sqrt(out.rate * (1.0 - out.rate) / n);
    return out;
}

Surface entropy_surface(int l_max, std::span<const double> sigma_grid, std::size_t n_samples,
                        const RandomStream& rng, Execution exec, int local_dim)
{
    return surface_over(l_max, sigma_grid, n_samples, rng, exec, local_dim,
                        [](const EigenvalueSet& lam) { return oracles::von_neumann_entropy(lam); });
}

Surface bond_dimension_surface(int l_max, std::span<const double> sigma_grid, double trunc, std::size_t n_samples,
                               const RandomStream& rng, Execution exec, int local_dim)
{
    if (!(trunc >= 0.0))
        throw Error(ErrorKind::invalid_input, "truncation threshold must be nonnegative");
    return surface_over(l_max, sigma_grid, n_samples, rng, exec, local_dim, [trunc](const EigenvalueSet& lam) {
        return static_cast<double>(std::count_if(lam.lambda.begin(), lam.lambda.end(),
                                                 [trunc](double v) { return v > trunc; }));
    });
}

double monotone_deviation(std::span<const double> values, std::span<const double> std_errors, bool increasing)
{
    if (values.size() != std_errors.size())
        throw Error(ErrorKind::invalid_input, "one standard error per value expected");
    if (values.empty())
        return 0.0;
    const double sign = increasing ? 1.0 : -1.0;
    // Pool adjacent violators on sign*value, which must come out non-decreasing.
    struct Block {
        double weighted_sum;
        double weight;
        std::size_t count;
    };
    std::vector<Block> blocks;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double se = std::max(std_errors[i], 1e-300);
        const double w = 1.0 / (se * se);
        blocks.push_back({w * sign * values[i], w, 1});
        while (blocks.size() > 1) {
            const Block& b = blocks.back();
            const Block& a = blocks[blocks.size() - 2];
            if (a.weighted_sum / a.weight <= b.weighted_sum / b.weight)
                break;
            Block merged{a.weighted_sum + b.weighted_sum, a.weight + b.weight, a.count + b.count};
            blocks.pop_back();
            blocks.back() = merged;
        }
    }
    double worst = 0.0;
    std::size_t i = 0;
    for (const Block& b : blocks) {
        const double fit = sign * b.weighted_sum / b.weight;
        for (std::size_t k = 0; k < b.count; ++k, ++i) {
            const double se = std::max(std_errors[i], 1e-300);
            worst = std::max(worst, std::abs(values[i] - fit) / se);
        }
    }
    return worst;
}

} // namespace sigens
