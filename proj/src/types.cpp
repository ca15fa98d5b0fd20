#include "sigens/types.hpp"

#include <algorithm>
#include <cmath>

namespace sigens {

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::invalid_dimension: return "invalid dimension";
    case ErrorKind::invalid_input: return "invalid input";
    case ErrorKind::empty_spectrum: return "empty spectrum";
    case ErrorKind::invalid_bipartition: return "invalid bipartition";
    case ErrorKind::index_out_of_range: return "index out of range";
    case ErrorKind::capacity: return "capacity exceeded";
    case ErrorKind::degenerate_state: return "degenerate state";
    case ErrorKind::rank_deficiency: return "rank deficiency";
    case ErrorKind::domain: return "domain error";
    case ErrorKind::io: return "i/o error";
    case ErrorKind::config: return "config error";
    }
    return "error";
}

std::vector<double> SchmidtSpectrum::eigenvalues() const
{
    std::vector<double> lam(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        lam[i] = values[i] * values[i];
    return lam;
}

void EnsembleSpec::validate() const
{
    if (length < 2)
        throw Error(ErrorKind::invalid_input, "chain length L must be >= 2, got " + std::to_string(length));
    if (local_dim < 2)
        throw Error(ErrorKind::invalid_input, "local dimension d must be >= 2, got " + std::to_string(local_dim));
    if (chi_max < 1)
        throw Error(ErrorKind::invalid_input, "chi_max must be >= 1, got " + std::to_string(chi_max));
    if (!(trunc_threshold >= 0.0 && trunc_threshold < 1.0))
        throw Error(ErrorKind::invalid_input, "truncation threshold must lie in [0, 1)");
    if (std::isnan(sigma) || sigma < 0.0)
        throw Error(ErrorKind::invalid_input, "sigma must be nonnegative or inf");
}

std::size_t subsystem_dimension(int bond, int length, int local_dim, std::size_t cap)
{
    const int sites = std::min(bond, length - bond);
    std::size_t dim = 1;
    for (int i = 0; i < sites; ++i) {
        if (dim >= cap / static_cast<std::size_t>(local_dim))
            return cap;
        dim *= static_cast<std::size_t>(local_dim);
    }
    return dim;
}

} // namespace sigens
