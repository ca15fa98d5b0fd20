#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "sigens/mps.hpp"
#include "sigens/random.hpp"
#include "sigens/types.hpp"

namespace sigens {

/// Target Schmidt spectra for bonds 1 ... L-1 of a chain.
struct TargetSpectra {
    std::vector<SchmidtSpectrum> spectra;
    int length = 0;
    int local_dim = 2;

    /// Checks count, bond labels, ordering, normalization and the dimension ceiling.
    void validate(double tol = 1e-10) const;
};

/// Samples one target per bond from the ensemble, with n_l = min(d^l, d^(L-l)),
/// then truncates per spec.
TargetSpectra sample_targets(const EnsembleSpec& spec, RandomStream& rng);

/// Bond dimensions m_0 ... m_L: min(d^l, d^(L-l), chi, target rank), then clipped
/// so that m_l <= d * m_(l-1) and m_l <= d * m_(l+1).
std::vector<Eigen::Index> plan_bond_dimensions(const TargetSpectra& targets, int chi_max);

/// The part of a target actually imposed on a bond of dimension m: the leading
/// m values (zero-padded if shorter), renormalized.
RealVector imposed_spectrum(const SchmidtSpectrum& target, Eigen::Index m);

/// Per-bond error: two-norm distance between target and actual eigenvalues
/// (squared Schmidt values), the shorter vector padded with zeros.
double spectrum_error(const SchmidtSpectrum& target, const SchmidtSpectrum& actual);

/// What warmup saw at each bond, for checking the recursion.
struct WarmupTrace {
    /// Singular values of the carried bond matrix after step l (bond l+1).
    std::vector<RealVector> carried_spectra;
    /// Largest total weight of negative eigenvalues removed from R R^dag.
    double max_clip = 0.0;
    std::vector<Eigen::Index> bond_dims;
};

/// Site-by-site construction. Returns a unit-norm left-canonical MPS whose
/// last bond carries its target exactly; earlier bonds are generally off.
/// Throws rank_deficiency (naming the bond) if the carried matrix loses rank.
MatrixProductState warmup(const TargetSpectra& targets, const EnsembleSpec& spec, RandomStream& rng,
                          WarmupTrace* trace = nullptr);

struct SweepOptions {
    int max_sweeps = 500;
    double delta = 1e-4;
    /// Stop early once the best pass residual of the last `stall_window`
    /// passes fails to improve on the earlier best by `stall_ratio`.
    /// Only checked after `stall_min_passes` passes; 0 disables.
    int stall_window = 10;
    int stall_min_passes = 20;
    double stall_ratio = 0.99;
};

struct ConstructionReport {
    MatrixProductState psi;
    TargetSpectra targets;
    std::vector<double> per_bond_error;
    double total_error = 0.0;
    int sweeps_used = 0;
    bool converged = false;
    /// Sum over bonds of singular-value mismatch seen during each pass.
    std::vector<double> pass_residuals;
    double warmup_clip = 0.0;
    std::uint64_t seed = 0;
};

/// Per-bond and mean errors of psi against the targets, from its own spectra.
void measure_errors(const MatrixProductState& psi, const TargetSpectra& targets,
                    std::vector<double>& per_bond, double& total);

/// Alternating refinement, right-to-left first. `converged` means the final
/// state's mean per-bond error is below options.delta.
ConstructionReport sweep(const MatrixProductState& psi, const TargetSpectra& targets,
                         const SweepOptions& options = {});

/// sample_targets, warmup and sweep. Targets use rng.derive(0), warmup rng.derive(1).
ConstructionReport build_state(const EnsembleSpec& spec, const RandomStream& rng,
                               const SweepOptions& options = {});

nlohmann::json targets_to_json(const TargetSpectra& targets);
TargetSpectra targets_from_json(const nlohmann::json& j);
/// Report without the state tensors; write those with the mps checkpoint functions.
nlohmann::json report_to_json(const ConstructionReport& report);

} // namespace sigens
