#include "sigens/construct.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "sigens/sphere.hpp"

namespace sigens {

namespace {

constexpr double kPseudoInverseCutoff = 1e-12;
constexpr std::size_t kMaxSampledDimension = std::size_t{1} << 24;

using Complex = std::complex<double>;

ComplexMatrix diag(const RealVector& v)
{
    return v.cast<Complex>().asDiagonal();
}

RealVector to_vector(const std::vector<double>& v)
{
    return Eigen::Map<const RealVector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

double padded_distance(const RealVector& a, const RealVector& b)
{
    const Eigen::Index n = std::max(a.size(), b.size());
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double x = i < a.size() ? a(i) : 0.0;
        const double y = i < b.size() ? b(i) : 0.0;
        acc += (x - y) * (x - y);
    }
    return std::sqrt(acc);
}

void check_feasible(const std::vector<Eigen::Index>& m, int d)
{
    for (std::size_t l = 0; l + 1 < m.size(); ++l)
        if (m[l + 1] > d * m[l] || m[l] > d * m[l + 1])
            throw Error(ErrorKind::invalid_input,
                        "bond dimensions " + std::to_string(m[l]) + " and " + std::to_string(m[l + 1]) +
                            " at bonds " + std::to_string(l) + "," + std::to_string(l + 1) +
                            " cannot both be full rank");
}

} // namespace

void TargetSpectra::validate(double tol) const
{
    if (length < 2 || local_dim < 2)
        throw Error(ErrorKind::invalid_input, "targets need L >= 2 and d >= 2");
    if (static_cast<int>(spectra.size()) != length - 1)
        throw Error(ErrorKind::invalid_input, "expected " + std::to_string(length - 1) + " target spectra, got " +
                                                  std::to_string(spectra.size()));
    for (int l = 1; l < length; ++l) {
        const auto& s = spectra[static_cast<std::size_t>(l - 1)];
        if (s.bond != l)
            throw Error(ErrorKind::invalid_input, "target " + std::to_string(l - 1) + " is labelled bond " +
                                                      std::to_string(s.bond));
        if (s.values.empty())
            throw Error(ErrorKind::empty_spectrum, "target at bond " + std::to_string(l) + " is empty");
        if (s.rank() > subsystem_dimension(l, length, local_dim))
            throw Error(ErrorKind::invalid_input, "target at bond " + std::to_string(l) + " exceeds d^min(l, L-l)");
        double sum = 0.0;
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            if (!(s.values[i] >= 0.0) || (i > 0 && s.values[i] > s.values[i - 1]))
                throw Error(ErrorKind::invalid_input,
                            "target at bond " + std::to_string(l) + " is not descending and nonnegative");
            sum += s.values[i] * s.values[i];
        }
        if (std::abs(sum - 1.0) > tol)
            throw Error(ErrorKind::invalid_input, "target at bond " + std::to_string(l) + " is not normalized");
    }
}

TargetSpectra sample_targets(const EnsembleSpec& spec, RandomStream& rng)
{
    spec.validate();
    TargetSpectra out;
    out.length = spec.length;
    out.local_dim = spec.local_dim;
    for (int l = 1; l < spec.length; ++l) {
        const std::size_t n = subsystem_dimension(l, spec.length, spec.local_dim, kMaxSampledDimension);
        if (n >= kMaxSampledDimension)
            throw Error(ErrorKind::capacity, "subsystem dimension at bond " + std::to_string(l) + " too large to sample");
        RandomStream sub = rng.derive(static_cast<std::uint64_t>(l));
        const EigenvalueSet lam = sample_eigenvalues(n, spec.sigma, sub);
        SchmidtSpectrum s = truncate_and_order(lam, static_cast<std::size_t>(spec.chi_max), spec.trunc_threshold);
        s.bond = l;
        out.spectra.push_back(std::move(s));
    }
    return out;
}

std::vector<Eigen::Index> plan_bond_dimensions(const TargetSpectra& targets, int chi_max)
{
    targets.validate(1e-9);
    const int L = targets.length;
    const Eigen::Index d = targets.local_dim;
    std::vector<Eigen::Index> m(static_cast<std::size_t>(L + 1), 1);
    for (int l = 1; l < L; ++l) {
        const auto cap = static_cast<Eigen::Index>(subsystem_dimension(l, L, targets.local_dim));
        m[static_cast<std::size_t>(l)] =
            std::min({cap, static_cast<Eigen::Index>(chi_max),
                      static_cast<Eigen::Index>(targets.spectra[static_cast<std::size_t>(l - 1)].rank())});
    }
    // A bond cannot exceed d times either neighbour; clipping only ever lowers
    // values, so one pass each way reaches the fixed point.
    for (int l = 1; l <= L; ++l)
        m[static_cast<std::size_t>(l)] = std::min(m[static_cast<std::size_t>(l)], d * m[static_cast<std::size_t>(l - 1)]);
    for (int l = L - 1; l >= 0; --l)
        m[static_cast<std::size_t>(l)] = std::min(m[static_cast<std::size_t>(l)], d * m[static_cast<std::size_t>(l + 1)]);
    return m;
}

RealVector imposed_spectrum(const SchmidtSpectrum& target, Eigen::Index m)
{
    RealVector t = RealVector::Zero(m);
    const Eigen::Index k = std::min<Eigen::Index>(m, static_cast<Eigen::Index>(target.rank()));
    for (Eigen::Index i = 0; i < k; ++i)
        t(i) = target.values[static_cast<std::size_t>(i)];
    const double nrm = t.norm();
    if (!(nrm > 0.0))
        throw Error(ErrorKind::empty_spectrum, "target at bond " + std::to_string(target.bond) + " has no weight");
    return t / nrm;
}

double spectrum_error(const SchmidtSpectrum& target, const SchmidtSpectrum& actual)
{
    return padded_distance(to_vector(target.eigenvalues()), to_vector(actual.eigenvalues()));
}

MatrixProductState warmup(const TargetSpectra& targets, const EnsembleSpec& spec, RandomStream& rng,
                          WarmupTrace* trace)
{
    spec.validate();
    if (targets.length != spec.length || targets.local_dim != spec.local_dim)
        throw Error(ErrorKind::invalid_input, "targets do not match the ensemble's L and d");
    const std::vector<Eigen::Index> m = plan_bond_dimensions(targets, spec.chi_max);
    const int L = spec.length;
    const int d = spec.local_dim;
    if (trace) {
        *trace = WarmupTrace{};
        trace->bond_dims = m;
    }

    MatrixProductState psi;
    psi.sites.reserve(static_cast<std::size_t>(L));
    // T = S W, the bond matrix carried from one step to the next.
    ComplexMatrix carried = ComplexMatrix::Identity(1, 1);

    for (int l = 0; l + 1 < L; ++l) {
        const Eigen::Index ml = m[static_cast<std::size_t>(l)];
        const Eigen::Index mn = m[static_cast<std::size_t>(l + 1)];
        const ComplexMatrix q = haar_random_isometry(d * ml, mn, rng);

        ComplexMatrix x(d * ml, mn);
        for (int s = 0; s < d; ++s)
            x.middleRows(s * ml, ml).noalias() = carried * q.middleRows(s * ml, ml);
        const Svd svd = thin_svd(x);

        const double cutoff = kPseudoInverseCutoff * svd.s(0);
        RealVector inv(svd.s.size());
        Eigen::Index kept = 0;
        for (Eigen::Index i = 0; i < svd.s.size(); ++i) {
            inv(i) = svd.s(i) > cutoff ? 1.0 / svd.s(i) : 0.0;
            kept += svd.s(i) > cutoff ? 1 : 0;
        }
        const RealVector target = imposed_spectrum(targets.spectra[static_cast<std::size_t>(l)], mn);
        const Eigen::Index target_rank = (target.array() > 0.0).count();
        if (kept < target_rank)
            throw Error(ErrorKind::rank_deficiency,
                        "bond " + std::to_string(l + 1) + ": carried matrix has rank " + std::to_string(kept) +
                            " but the target needs " + std::to_string(target_rank));

        const RealVector scaled = inv.cwiseProduct(target);
        ComplexMatrix rr = svd.vh.adjoint() * scaled.cwiseAbs2().cast<Complex>().asDiagonal() * svd.vh;
        rr = 0.5 * (rr + rr.adjoint()).eval();
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(rr);
        RealVector e = eig.eigenvalues();
        double clipped = 0.0;
        for (Eigen::Index i = 0; i < e.size(); ++i)
            if (e(i) < 0.0) {
                clipped -= e(i);
                e(i) = 0.0;
            }
        const ComplexMatrix r = eig.eigenvectors() * diag(e.cwiseSqrt());

        psi.sites.push_back(SiteTensor::from_stacked_rows(svd.u, d));
        carried = diag(svd.s) * svd.vh * r;
        if (trace) {
            trace->carried_spectra.push_back(singular_values(carried));
            trace->max_clip = std::max(trace->max_clip, clipped);
        }
    }

    // Close the chain with a random right isometry B (m_(L-1) x d).
    const Eigen::Index mlast = m[static_cast<std::size_t>(L - 1)];
    const ComplexMatrix b = haar_random_isometry(d, mlast, rng).adjoint();
    ComplexMatrix last = carried * b;
    const double nrm = last.norm();
    if (!(nrm > 0.0))
        throw Error(ErrorKind::degenerate_state, "warmup produced a zero state");
    last /= nrm;
    psi.sites.push_back(SiteTensor::from_stacked_cols(last, d));
    psi.canonical = CanonicalForm::left;
    psi.center = L - 1;
    return psi;
}

void measure_errors(const MatrixProductState& psi, const TargetSpectra& targets,
                    std::vector<double>& per_bond, double& total)
{
    const auto spectra = extract_all_spectra(psi);
    per_bond.assign(spectra.size(), 0.0);
    total = 0.0;
    for (std::size_t i = 0; i < spectra.size(); ++i) {
        per_bond[i] = spectrum_error(targets.spectra[i], spectra[i]);
        total += per_bond[i];
    }
    if (!spectra.empty())
        total /= static_cast<double>(spectra.size());
}

ConstructionReport sweep(const MatrixProductState& input, const TargetSpectra& targets, const SweepOptions& options)
{
    targets.validate(1e-9);
    input.validate();
    if (input.length() != targets.length || input.local_dim() != targets.local_dim)
        throw Error(ErrorKind::invalid_input, "state and targets disagree on L or d");
    if (options.max_sweeps < 1)
        throw Error(ErrorKind::invalid_input, "max_sweeps must be >= 1");

    const int L = input.length();
    const int d = input.local_dim();
    MatrixProductState psi = input.canonical == CanonicalForm::left ? input : canonicalize_left(input);
    const std::vector<Eigen::Index> m = psi.bond_dims();
    check_feasible(m, d);

    std::vector<RealVector> imposed;
    for (int l = 1; l < L; ++l)
        imposed.push_back(imposed_spectrum(targets.spectra[static_cast<std::size_t>(l - 1)], m[static_cast<std::size_t>(l)]));

    ConstructionReport report;
    report.targets = targets;
    double best_before_window = std::numeric_limits<double>::infinity();

    for (int pass = 0; pass < options.max_sweeps; ++pass) {
        double residual = 0.0;
        if (pass % 2 == 0) {
            for (int j = L - 1; j >= 1; --j) {
                auto& site = psi.sites[static_cast<std::size_t>(j)];
                const Svd svd = thin_svd(site.stacked_cols());
                const RealVector& t = imposed[static_cast<std::size_t>(j - 1)];
                residual += padded_distance(t, svd.s);
                site = SiteTensor::from_stacked_cols(svd.vh, d);
                psi.sites[static_cast<std::size_t>(j - 1)].apply_right(svd.u * diag(t));
            }
            psi.canonical = CanonicalForm::right;
            psi.center = 0;
        } else {
            for (int j = 0; j + 1 < L; ++j) {
                auto& site = psi.sites[static_cast<std::size_t>(j)];
                const Svd svd = thin_svd(site.stacked_rows());
                const RealVector& t = imposed[static_cast<std::size_t>(j)];
                residual += padded_distance(t, svd.s);
                site = SiteTensor::from_stacked_rows(svd.u, d);
                psi.sites[static_cast<std::size_t>(j + 1)].apply_left(diag(t) * svd.vh);
            }
            psi.canonical = CanonicalForm::left;
            psi.center = L - 1;
        }
        report.pass_residuals.push_back(residual);
        report.sweeps_used = pass + 1;
        if (residual < options.delta)
            break;

        const int window = options.stall_window;
        const auto n = static_cast<int>(report.pass_residuals.size());
        if (window > 0 && n > window) {
            best_before_window = std::min(best_before_window, report.pass_residuals[static_cast<std::size_t>(n - window - 1)]);
            if (n > options.stall_min_passes) {
                const double recent = *std::min_element(report.pass_residuals.end() - window, report.pass_residuals.end());
                if (recent > options.stall_ratio * best_before_window)
                    break;
            }
        }
    }

    // the absorbed target values only have unit weight when they already match
    auto& centre = psi.sites[static_cast<std::size_t>(psi.center)];
    const double weight = centre.stacked_rows().norm();
    if (!(weight > 0.0))
        throw Error(ErrorKind::degenerate_state, "sweep produced a zero state");
    centre.apply_right(ComplexMatrix::Identity(centre.right_dim(), centre.right_dim()) / weight);

    measure_errors(psi, targets, report.per_bond_error, report.total_error);
    report.converged = report.total_error < options.delta;
    report.psi = std::move(psi);
    return report;
}

ConstructionReport build_state(const EnsembleSpec& spec, const RandomStream& rng, const SweepOptions& options)
{
    RandomStream target_rng = rng.derive(0);
    RandomStream warmup_rng = rng.derive(1);
    const TargetSpectra targets = sample_targets(spec, target_rng);
    WarmupTrace trace;
    const MatrixProductState start = warmup(targets, spec, warmup_rng, &trace);
    ConstructionReport report = sweep(start, targets, options);
    report.warmup_clip = trace.max_clip;
    report.seed = spec.seed;
    return report;
}

nlohmann::json targets_to_json(const TargetSpectra& targets)
{
    nlohmann::json spectra = nlohmann::json::array();
    for (const auto& s : targets.spectra)
        spectra.push_back(s.values);
    return {{"length", targets.length}, {"local_dim", targets.local_dim}, {"spectra", std::move(spectra)}};
}

TargetSpectra targets_from_json(const nlohmann::json& j)
{
    try {
        TargetSpectra out;
        out.length = j.at("length").get<int>();
        out.local_dim = j.at("local_dim").get<int>();
        int bond = 1;
        for (const auto& s : j.at("spectra")) {
            SchmidtSpectrum spec;
            spec.values = s.get<std::vector<double>>();
            spec.bond = bond++;
            out.spectra.push_back(std::move(spec));
        }
        out.validate(1e-9);
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::io, std::string("malformed targets JSON: ") + e.what());
    }
}

nlohmann::json report_to_json(const ConstructionReport& report)
{
    return {{"seed", report.seed},
            {"converged", report.converged},
            {"sweeps_used", report.sweeps_used},
            {"total_error", report.total_error},
            {"per_bond_error", report.per_bond_error},
            {"pass_residuals", report.pass_residuals},
            {"warmup_clip", report.warmup_clip},
            {"bond_dims", report.psi.bond_dims()},
            {"targets", targets_to_json(report.targets)}};
}

} // namespace sigens
