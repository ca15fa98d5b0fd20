#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sigens {

enum class ErrorKind {
    invalid_dimension,
    invalid_input,
    empty_spectrum,
    invalid_bipartition,
    index_out_of_range,
    capacity,
    degenerate_state,
    rank_deficiency,
    domain,
    io,
    config,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Width value that routes eigenvalue sampling to the uniform orthant sampler.
inline constexpr double kUniformSigma = std::numeric_limits<double>::infinity();

/// Eigenvalues of a reduced density operator. Entries are nonnegative and sum to one.
struct EigenvalueSet {
    std::vector<double> lambda;
    bool ordered = false; // descending when true

    std::size_t size() const { return lambda.size(); }
};

/// Singular values across one cut of a chain, descending, squares summing to one.
/// `bond` is the number of sites to the left of the cut (1 ... L-1).
struct SchmidtSpectrum {
    std::vector<double> values;
    int bond = 0;

    std::size_t rank() const { return values.size(); }
    std::vector<double> eigenvalues() const;
};

/// Full definition of one sigma-ensemble.
struct EnsembleSpec {
    double sigma = kUniformSigma;
    int length = 2;
    int local_dim = 2;
    int chi_max = 64;
    double trunc_threshold = 1e-16;
    std::uint64_t seed = 0;

    bool uniform() const { return sigma == kUniformSigma; }
    void validate() const;
};

/// Hilbert-space dimension of the smaller side of the cut after `bond` sites,
/// saturating at `cap` so large chains do not overflow.
std::size_t subsystem_dimension(int bond, int length, int local_dim,
                                std::size_t cap = std::size_t{1} << 40);

} // namespace sigens
