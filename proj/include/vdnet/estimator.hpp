#pragma once

#include <cstdint>

#include "vdnet/builder.hpp"
#include "vdnet/heisenberg.hpp"

namespace vdnet {

// An observable as a real combination of Pauli strings on the N data qubits.
struct Observable {
    std::vector<PauliString> terms;

    int width() const { return terms.empty() ? 0 : terms.front().width(); }
    void validate(int N) const;
};

struct EstimateReport {
    Impl impl = Impl::CR;
    int n = 0, N = 0;
    double c = 1.0;
    std::string mode;  // exact | mc | oracle
    long M = 0;        // shots (0 for exact/oracle)
    double numeratorMean = 0.0;
    double denominatorMean = 1.0;
    double ratio = 0.0;
    double stdError = 0.0;  // 0 for exact modes
    double deltaE = 0.0;
    double reference = 0.0;  // dominant-eigenvector expectation
    std::uint64_t seed = 0;
    std::string notes;

    std::string csv_row() const;  // impl,n,N,c,mode,M,ratio,stderr,deltaE,reference,seed
};

// Per-shot estimator samples; the raw material for (re-)batching.
struct SampleStream {
    std::vector<double> aO, aI;
    std::uint64_t seed = 0;

    long M() const { return static_cast<long>(aO.size()); }
    void validate() const;  // equal lengths, positive multiple of 100
    std::string to_csv() const;
    static SampleStream from_csv(const std::string& text);
    void save_binary(const std::string& path) const;
    static SampleStream load_binary(const std::string& path);
};

// Splits the stream into 100 batches and returns the population standard
// deviation (divisor 100) of the 100 batch-mean ratios.
double batch_standard_error(const SampleStream& stream);

// Matrix-power oracle: sum_i c_i Tr[sigma_i rho^n] / Tr[rho^n].
double ideal_vd_oracle(const Matrix& rho, const Observable& obs, int n);

// <psi|O|psi> for the dominant eigenvector of rho; ties broken by the lowest
// eigenindex.  A near-degenerate top eigenvalue (within 1e-12) appends a
// warning if `warning` is given.
double dominant_reference(const Matrix& rho, const Observable& obs,
                          std::string* warning = nullptr);

// Runs the preparation circuit under `model` on a density matrix; the
// returned state keeps its per-qubit clocks.
QuantumState noisy_prep_density(const TimedCircuit& prep, const NoiseModel& model);

struct EstimatorSpec {
    Impl impl = Impl::CR;
    int n = 2;
    int N = 1;
    TimedCircuit statePrep;  // width N, events tagged "prep..."
    Observable observable;
    NoiseModel vdModel;            // distillation circuitry
    NoiseModel prepModel;          // state preparation
    bool chargeNetworkIdle = false;

    VDPlan plan(int copies) const;
};

// Density-matrix evaluation of the full measurement procedure (exact in the
// noise model).  run_exact_range shares the copy-accumulation prefix across
// several n for CR/QECR.
EstimateReport run_exact(const EstimatorSpec& spec);
std::vector<EstimateReport> run_exact_range(const EstimatorSpec& spec,
                                            const std::vector<int>& ns);

// Trajectory sampling; M must be a positive multiple of 100.  Per shot the
// noise realisation up to the final measurement layer is shared across the
// numerator/denominator terms; each term records its exact final expectation
// (measurements replaced by their artificial-gate reduction).  Error-free
// shots short-circuit to the cached noiseless values.
EstimateReport run_monte_carlo(const EstimatorSpec& spec, long M, std::uint64_t seed,
                               SampleStream* stream = nullptr);

struct LinearFit {
    double slope = 0.0, intercept = 0.0;
};

// Least-squares fit of log10(stdError) against log10(M); needs >= 4 points
// spanning at least one decade in M.
LinearFit scaling_fit(const std::vector<double>& Ms, const std::vector<double>& stdErrors);

struct SweepSpec {
    Impl impl = Impl::CR;
    std::vector<int> ns;
    int N = 2;
    std::vector<double> cs{1.0};
    NoiseModel baseModel = NoiseModel::reference();
    Observable observable;
    HeisenbergParams prep;
    std::string engine = "exact";  // exact | mc | oracle
    long M = 0;
    std::uint64_t seed = 1;
    bool noiseInPrepOnly = false;
    bool chargeNetworkIdle = false;
    // which error rates the sweep parameter c scales
    bool scaleP1Q = true, scaleP2Q = true, scalePBell = true;
};

std::vector<EstimateReport> run_sweep(const SweepSpec& spec);

}  // namespace vdnet
