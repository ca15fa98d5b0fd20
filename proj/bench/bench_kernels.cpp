// Serial reference loops against the OpenMP sample loops, at a few thread counts.
// Usage: sigens-bench [scale]   (scale multiplies the sample counts, default 1)

#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include <omp.h>

#include "sigens/diagnostics.hpp"

using namespace sigens;

namespace {

double time_it(const std::function<double(Execution)>& kernel, Execution exec, double& checksum)
{
    const double start = omp_get_wtime();
    checksum = kernel(exec);
    return omp_get_wtime() - start;
}

void run_case(const std::string& name, const std::function<double(Execution)>& kernel,
              const std::vector<int>& thread_counts)
{
    double reference = 0.0;
    const double serial = time_it(kernel, Execution::serial(), reference);
    std::cout << std::left << std::setw(28) << name << " serial      " << std::fixed << std::setprecision(4)
              << serial << " s\n";
    for (int t : thread_counts) {
        double checksum = 0.0;
        const double elapsed = time_it(kernel, Execution::parallel(t), checksum);
        std::cout << std::left << std::setw(28) << name << " " << std::setw(2) << t << " threads  " << elapsed
                  << " s  speedup " << std::setprecision(2) << serial / elapsed << std::setprecision(4)
                  << (checksum == reference ? "" : "  MISMATCH") << "\n";
    }
}

} // namespace

int main(int argc, char** argv)
{
    const std::size_t scale = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 1;
    const int max_threads = omp_get_max_threads();
    std::vector<int> thread_counts;
    for (int t = 1; t <= max_threads; t *= 2)
        thread_counts.push_back(t);
    if (thread_counts.back() != max_threads)
        thread_counts.push_back(max_threads);
    std::cout << "max threads: " << max_threads << "\n";

    const RandomStream rng(2024);

    run_case("ordered spectrum n=128", [&](Execution e) {
        return mean_ordered_spectrum(128, kUniformSigma, 20000 * scale, rng, e).mean[0];
    }, thread_counts);

    run_case("gaussian entropy n=64", [&](Execution e) {
        return mean_sampled_entropy(64, 0.08, 20000 * scale, rng, e).mean;
    }, thread_counts);

    run_case("haar entropy L=10", [&](Execution e) {
        return haar_state_entropy(5, 10, 2, 500 * scale, rng, e).mean;
    }, thread_counts);

    run_case("admission L=8 chi=16", [&](Execution e) {
        EnsembleSpec spec;
        spec.length = 8;
        spec.chi_max = 16;
        return admission_rate(spec, 1e-3, 50 * scale, rng, e).rate;
    }, thread_counts);

    return 0;
}
