#include "vdnet/estimator.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

namespace vdnet {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void Observable::validate(int N) const {
    if (terms.empty()) throw std::invalid_argument("observable has no terms");
    for (const auto& t : terms)
        if (t.width() != N) throw std::invalid_argument("observable term width must equal N");
}

std::string EstimateReport::csv_row() const {
    std::ostringstream os;
    os << std::setprecision(12);
    os << impl_name(impl) << ',' << n << ',' << N << ',' << c << ',' << mode << ',' << M
       << ',' << ratio << ',' << stdError << ',' << deltaE << ',' << reference << ',' << seed;
    return os.str();
}

void SampleStream::validate() const {
    if (aO.size() != aI.size())
        throw std::invalid_argument("sample arrays must have equal length");
    if (aO.empty() || aO.size() % 100 != 0)
        throw std::invalid_argument("M must be a positive multiple of 100");
}

std::string SampleStream::to_csv() const {
    std::ostringstream os;
    os << std::setprecision(17) << "aO,aI\n";
    for (std::size_t i = 0; i < aO.size(); ++i) os << aO[i] << ',' << aI[i] << '\n';
    return os.str();
}

SampleStream SampleStream::from_csv(const std::string& text) {
    SampleStream s;
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line.rfind("aO,aI", 0) != 0)
        throw std::invalid_argument("sample stream CSV must start with an aO,aI header");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("malformed sample stream row: " + line);
        s.aO.push_back(std::stod(line.substr(0, comma)));
        s.aI.push_back(std::stod(line.substr(comma + 1)));
    }
    return s;
}

void SampleStream::save_binary(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    std::uint64_t m = aO.size(), sd = seed;
    f.write(reinterpret_cast<const char*>(&m), sizeof m);
    f.write(reinterpret_cast<const char*>(&sd), sizeof sd);
    f.write(reinterpret_cast<const char*>(aO.data()), std::streamsize(m * sizeof(double)));
    f.write(reinterpret_cast<const char*>(aI.data()), std::streamsize(m * sizeof(double)));
}

SampleStream SampleStream::load_binary(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::uint64_t m = 0, sd = 0;
    f.read(reinterpret_cast<char*>(&m), sizeof m);
    f.read(reinterpret_cast<char*>(&sd), sizeof sd);
    SampleStream s;
    s.seed = sd;
    s.aO.resize(m);
    s.aI.resize(m);
    f.read(reinterpret_cast<char*>(s.aO.data()), std::streamsize(m * sizeof(double)));
    f.read(reinterpret_cast<char*>(s.aI.data()), std::streamsize(m * sizeof(double)));
    if (!f) throw std::runtime_error("truncated sample stream file: " + path);
    return s;
}

double batch_standard_error(const SampleStream& stream) {
    stream.validate();
    const long B = 100;
    long bs = stream.M() / B;
    std::vector<double> ratios(B);
    for (long b = 0; b < B; ++b) {
        double mo = 0.0, mi = 0.0;
        for (long i = b * bs; i < (b + 1) * bs; ++i) {
            mo += stream.aO[i];
            mi += stream.aI[i];
        }
        if (mi == 0.0)
            throw std::runtime_error("batch " + std::to_string(b) +
                                     " has zero denominator mean");
        ratios[b] = mo / mi;
    }
    double mean = 0.0;
    for (double r : ratios) mean += r;
    mean /= double(B);
    double var = 0.0;
    for (double r : ratios) var += (r - mean) * (r - mean);
    var /= double(B);  // population convention
    return std::sqrt(var);
}

double ideal_vd_oracle(const Matrix& rho, const Observable& obs, int n) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    // Renormalise by the running trace each power step: the ratio is
    // unchanged and Tr[rho^n] (tiny for large n) never underflows.
    Matrix rn = rho;
    double den = rn.trace().real();
    if (den < 1e-14) throw std::runtime_error("Tr[rho^n] vanishes");
    rn /= den;
    for (int k = 1; k < n; ++k) {
        rn = rn * rho;
        double step = rn.trace().real();
        if (step < 1e-14) throw std::runtime_error("Tr[rho^n] vanishes");
        rn /= step;
    }
    den = 1.0;
    QuantumState st;
    st.kind = StateKind::Density;
    st.width = static_cast<int>(std::lround(std::log2(double(rho.rows()))));
    st.rho = rn / den;
    return expectation(st, obs.terms);
}

double dominant_reference(const Matrix& rho, const Observable& obs, std::string* warning) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
    const auto& ev = es.eigenvalues();
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < ev.size(); ++i)
        if (ev(i) > ev(best)) best = i;  // ties keep the lowest eigenindex
    if (warning) {
        for (Eigen::Index i = 0; i < ev.size(); ++i)
            if (i != best && std::abs(ev(i) - ev(best)) < 1e-12) {
                *warning += "degenerate dominant eigenvalue;";
                break;
            }
    }
    QuantumState st = QuantumState::from_vector(es.eigenvectors().col(best));
    return expectation(st, obs.terms);
}

QuantumState noisy_prep_density(const TimedCircuit& prep, const NoiseModel& model) {
    QuantumState st = QuantumState::zero_state(prep.width, StateKind::Density);
    std::vector<double> clocks(prep.width, 0.0);
    TimedCircuit sched = schedule_noise(prep, model, model, &clocks);
    run_density(sched, st);
    st.clocks = clocks;
    return st;
}

VDPlan EstimatorSpec::plan(int copies) const {
    VDPlan p;
    p.impl = impl;
    p.n = copies;
    p.N = N;
    p.sigma = identity_string(N);
    p.statePrep = statePrep;
    p.mode = NetworkMode::Folded;
    p.chargeNetworkIdle = chargeNetworkIdle;
    return p;
}

namespace {

TimedCircuit slice(const TimedCircuit& c, std::size_t from, std::size_t to) {
    TimedCircuit out;
    out.width = c.width;
    out.numBits = c.numBits;
    out.events.assign(c.events.begin() + from, c.events.begin() + to);
    return out;
}

EstimateReport base_report(const EstimatorSpec& spec, int n, const std::string& mode) {
    EstimateReport r;
    r.impl = spec.impl;
    r.n = n;
    r.N = spec.N;
    r.mode = mode;
    QuantumState prep = noisy_prep_density(spec.statePrep, spec.prepModel);
    r.reference = dominant_reference(prep.rho, spec.observable, &r.notes);
    return r;
}

// All numerator terms plus the identity (denominator) as the last entry.
std::vector<PauliString> term_list(const Observable& obs, int N) {
    std::vector<PauliString> terms = obs.terms;
    terms.push_back(identity_string(N));
    return terms;
}

EstimateReport finish(EstimateReport r, double num, double den) {
    if (den <= 0.0) throw std::runtime_error("denominator Tr[rho^n] estimate is not positive");
    r.numeratorMean = num;
    r.denominatorMean = den;
    r.ratio = num / den;
    r.deltaE = std::abs(r.ratio - r.reference);
    return r;
}

// Exact value of one term: the controlled-sigma precedes the derangement, so
// the term's circuit is sigma followed by everything from `from` onwards,
// with the measurements replaced by their artificial-gate reduction.
double exact_term_from(const QuantumState& prefixState, const std::vector<double>& clocks,
                       const VdProgram& program, std::size_t from, const PauliString& sigma,
                       const EstimatorSpec& spec) {
    TimedCircuit tc = slice(program.circuit, from, program.circuit.events.size());
    auto cs = controlled_sigma_events(sigma, program.ancControl, program.dataOffset);
    tc.events.insert(tc.events.begin(), cs.begin(), cs.end());
    std::vector<double> cl = clocks;
    TimedCircuit sched = schedule_noise(tc, spec.vdModel, spec.prepModel, &cl);
    auto [reduced, obsZ] = insert_artificial_gates(sched, program.rule);
    QuantumState st = prefixState;
    run_density(reduced, st);
    return expectation(st, obsZ);
}

// Applies just the controlled-sigma (noisily scheduled) to a register state.
void apply_sigma_prefix(QuantumState& st, std::vector<double>& clocks,
                        const VdProgram& program, const PauliString& sigma,
                        const EstimatorSpec& spec) {
    auto cs = controlled_sigma_events(sigma, program.ancControl, program.dataOffset);
    if (cs.empty()) return;
    TimedCircuit tc;
    tc.width = program.circuit.width;
    tc.numBits = program.circuit.numBits;
    tc.events = std::move(cs);
    TimedCircuit sched = schedule_noise(tc, spec.vdModel, spec.prepModel, &clocks);
    run_density(sched, st);
}

std::pair<double, double> num_den(const Observable& obs, const std::vector<double>& vals) {
    double num = 0.0;
    for (std::size_t i = 0; i < obs.terms.size(); ++i)
        num += obs.terms[i].coefficient * vals[i];
    return {num, vals.back()};
}

// Measurement-basis rotation for a single-copy (n = 1) term; the support of
// the term is Z-measured after the rotation.
TimedCircuit n1_rotation(const PauliString& term, std::vector<int>* support) {
    TimedCircuit rot;
    rot.width = term.width();
    for (int q = 0; q < term.width(); ++q) {
        char p = term.ops[q];
        if (p == 'I') continue;
        if (support) support->push_back(q);
        if (p == 'X')
            for (const auto& g : decompose_hadamard(q).gates)
                rot.events.push_back(make_gate(g, "meas"));
        else if (p == 'Y')
            rot.events.push_back(make_gate(rx(q, kPi / 2.0), "meas"));
    }
    return rot;
}

EstimateReport exact_n1(const EstimatorSpec& spec) {
    EstimateReport r = base_report(spec, 1, "exact");
    QuantumState prep = noisy_prep_density(spec.statePrep, spec.prepModel);
    double num = 0.0;
    for (const PauliString& term : spec.observable.terms) {
        std::vector<int> support;
        TimedCircuit rot = n1_rotation(term, &support);
        QuantumState st = prep;
        std::vector<double> cl = prep.clocks;
        TimedCircuit sched = schedule_noise(rot, spec.vdModel, spec.prepModel, &cl);
        run_density(sched, st);
        PauliString zs = identity_string(spec.N);
        for (int q : support) {
            apply_bitflip(st, q, spec.vdModel.pDetect);
            zs.ops[q] = 'Z';
        }
        num += term.coefficient * expectation(st, zs);
    }
    return finish(std::move(r), num, 1.0);
}

EstimateReport exact_bw(const EstimatorSpec& spec) {
    int n = spec.n, N = spec.N;
    int m = std::max(1, (n - 1) / 2);
    int W = n * N + m;
    if (W > kDensityWidthCap)
        throw std::runtime_error("exact BW run needs " + std::to_string(W) +
                                 " density qubits (cap " + std::to_string(kDensityWidthCap) +
                                 "); use the Monte Carlo engine");
    EstimateReport r = base_report(spec, n, "exact");
    QuantumState prep = noisy_prep_density(spec.statePrep, spec.prepModel);

    QuantumState full = prep;
    for (int copy = 2; copy <= n; ++copy) full = kron(full, prep);
    full = kron(full, QuantumState::zero_state(m, StateKind::Density));
    std::vector<double> clocks;
    for (int copy = 0; copy < n; ++copy)
        clocks.insert(clocks.end(), prep.clocks.begin(), prep.clocks.end());
    clocks.resize(W, 0.0);

    VdProgram program = build_vd_program(spec.plan(n));
    TimedCircuit mid = slice(program.circuit, program.prepEnd, program.sigmaEarlyPos);
    TimedCircuit sched = schedule_noise(mid, spec.vdModel, spec.prepModel, &clocks);
    run_density(sched, full);

    auto terms = term_list(spec.observable, N);
    std::vector<double> vals;
    for (const auto& t : terms)
        vals.push_back(exact_term_from(full, clocks, program, program.sigmaEarlyPos, t, spec));
    auto [num, den] = num_den(spec.observable, vals);
    return finish(std::move(r), num, den);
}

std::map<int, EstimateReport> exact_cr_qecr(const EstimatorSpec& spec, std::vector<int> ns) {
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    int nmax = ns.back();
    VdProgram program = build_vd_program(spec.plan(nmax));
    int W = program.circuit.width;
    if (W > kDensityWidthCap)
        throw std::runtime_error("exact run needs " + std::to_string(W) +
                                 " density qubits (cap " + std::to_string(kDensityWidthCap) +
                                 "); use the Monte Carlo engine");
    auto terms = term_list(spec.observable, spec.N);

    // shared prefix: parallel copy preparations plus ancilla initialisation
    QuantumState st0 = QuantumState::zero_state(W, StateKind::Density);
    std::vector<double> clocks0(W, 0.0);
    {
        TimedCircuit seg = slice(program.circuit, 0, program.sigmaEarlyPos);
        TimedCircuit sched = schedule_noise(seg, spec.vdModel, spec.prepModel, &clocks0);
        run_density(sched, st0);
    }
    // the controlled-sigma precedes the derangement, so each term carries its
    // own register state through the cycles (cached incrementally across n)
    std::vector<QuantumState> sts(terms.size(), st0);
    std::vector<std::vector<double>> cls(terms.size(), clocks0);
    for (std::size_t i = 0; i < terms.size(); ++i)
        apply_sigma_prefix(sts[i], cls[i], program, terms[i], spec);

    std::map<int, EstimateReport> out;
    PauliString iden = identity_string(spec.N);
    std::size_t prev = program.sigmaEarlyPos;
    for (int l = 2; l <= nmax; ++l) {
        std::size_t end = program.cycleEnds[l - 2];
        if (end > prev)
            for (std::size_t i = 0; i < terms.size(); ++i) {
                TimedCircuit seg = slice(program.circuit, prev, end);
                TimedCircuit sched = schedule_noise(seg, spec.vdModel, spec.prepModel, &cls[i]);
                run_density(sched, sts[i]);
            }
        prev = end;
        if (std::find(ns.begin(), ns.end(), l) == ns.end()) continue;
        std::vector<double> vals;
        for (std::size_t i = 0; i < terms.size(); ++i)
            vals.push_back(
                exact_term_from(sts[i], cls[i], program, program.sigmaLatePos, iden, spec));
        auto [num, den] = num_den(spec.observable, vals);
        out.emplace(l, finish(base_report(spec, l, "exact"), num, den));
    }
    return out;
}

}  // namespace

EstimateReport run_exact(const EstimatorSpec& spec) {
    spec.observable.validate(spec.N);
    if (spec.n == 1) return exact_n1(spec);
    if (spec.impl == Impl::BW) return exact_bw(spec);
    return exact_cr_qecr(spec, {spec.n}).at(spec.n);
}

std::vector<EstimateReport> run_exact_range(const EstimatorSpec& spec,
                                            const std::vector<int>& ns) {
    spec.observable.validate(spec.N);
    std::map<int, EstimateReport> done;
    if (spec.impl != Impl::BW) {
        std::vector<int> multi;
        for (int n : ns)
            if (n >= 2) multi.push_back(n);
        if (!multi.empty()) done = exact_cr_qecr(spec, multi);
    }
    std::vector<EstimateReport> out;
    for (int n : ns) {
        auto it = done.find(n);
        if (it != done.end()) {
            out.push_back(it->second);
            continue;
        }
        EstimatorSpec s = spec;
        s.n = n;
        out.push_back(run_exact(s));
    }
    return out;
}

LinearFit scaling_fit(const std::vector<double>& Ms, const std::vector<double>& stdErrors) {
    if (Ms.size() != stdErrors.size() || Ms.size() < 4)
        throw std::invalid_argument("scaling_fit needs >= 4 matched (M, stdError) points");
    double lo = *std::min_element(Ms.begin(), Ms.end());
    double hi = *std::max_element(Ms.begin(), Ms.end());
    if (lo <= 0.0 || hi / lo < 10.0)
        throw std::invalid_argument("M values must span at least one decade");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double k = double(Ms.size());
    for (std::size_t i = 0; i < Ms.size(); ++i) {
        if (stdErrors[i] <= 0.0)
            throw std::invalid_argument("stdError values must be positive for the log fit");
        double x = std::log10(Ms[i]);
        double y = std::log10(stdErrors[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    LinearFit f;
    f.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    f.intercept = (sy - f.slope * sx) / k;
    return f;
}

namespace {

struct McTerm {
    TimedCircuit reduced;   // scheduled suffix with the artificial-gate reduction
    PauliString observable; // Z string evaluated on the final state
    double idealValue = 0.0;
};

EstimateReport mc_finish(EstimateReport r, const EstimatorSpec& spec,
                         const std::vector<std::vector<double>>& vals, long M,
                         std::uint64_t seed, SampleStream* streamOut) {
    SampleStream stream;
    stream.seed = seed;
    stream.aO.resize(M);
    stream.aI.resize(M);
    std::size_t nTerms = spec.observable.terms.size();
    for (long s = 0; s < M; ++s) {
        double num = 0.0;
        for (std::size_t i = 0; i < nTerms; ++i)
            num += spec.observable.terms[i].coefficient * vals[s][i];
        stream.aO[s] = num;
        stream.aI[s] = vals[s][nTerms];
    }
    double tn = 0.0, td = 0.0;
    for (long s = 0; s < M; ++s) {
        tn += stream.aO[s];
        td += stream.aI[s];
    }
    r.M = M;
    r.seed = seed;
    r.stdError = batch_standard_error(stream);
    r.notes += "prefix shared, suffixes independent;";
    if (streamOut) *streamOut = std::move(stream);
    return finish(std::move(r), tn / double(M), td / double(M));
}

EstimateReport mc_n1(const EstimatorSpec& spec, long M, std::uint64_t seed,
                     SampleStream* streamOut) {
    EstimateReport r = base_report(spec, 1, "mc");
    std::vector<double> pc(spec.N, 0.0);
    TimedCircuit schedPrep = schedule_noise(spec.statePrep, spec.prepModel, spec.prepModel, &pc);

    std::vector<McTerm> terms;
    for (const PauliString& term : spec.observable.terms) {
        std::vector<int> support;
        TimedCircuit rot = n1_rotation(term, &support);
        std::vector<double> cl = pc;
        McTerm mt;
        mt.reduced = schedule_noise(rot, spec.vdModel, spec.prepModel, &cl);
        for (int q : support)
            if (spec.vdModel.pDetect > 0.0)
                mt.reduced.events.push_back(
                    make_channel(ChannelKind::BitFlip, {q}, spec.vdModel.pDetect, "detect"));
        mt.observable = identity_string(spec.N);
        for (int q : support) mt.observable.ops[q] = 'Z';
        terms.push_back(std::move(mt));
    }
    // identity denominator: A_I is identically 1 for a single copy
    {
        McTerm mt;
        mt.reduced.width = spec.N;
        mt.observable = identity_string(spec.N);
        mt.idealValue = 1.0;
        terms.push_back(std::move(mt));
    }
    // noiseless reference values for error-free shots
    {
        QuantumState st0 = QuantumState::zero_state(spec.N, StateKind::Statevector);
        Rng dummy(0);
        std::vector<int> bits;
        run_trajectory(spec.statePrep, st0, dummy, bits);
        for (std::size_t t = 0; t + 1 < terms.size(); ++t) {
            QuantumState st = st0;
            TimedCircuit rot = n1_rotation(spec.observable.terms[t], nullptr);
            run_trajectory(rot, st, dummy, bits);
            terms[t].idealValue = expectation(st, terms[t].observable);
        }
    }

    std::vector<std::vector<double>> vals(M, std::vector<double>(terms.size(), 0.0));
    for (long s = 0; s < M; ++s) {
        Rng prng = Rng::derived(seed, std::uint64_t(s), 0);
        QuantumState st = QuantumState::zero_state(spec.N, StateKind::Statevector);
        std::vector<int> bits;
        int firedPrefix = run_trajectory(schedPrep, st, prng, bits);
        for (std::size_t t = 0; t < terms.size(); ++t) {
            Rng trng = Rng::derived(seed, std::uint64_t(s), 100 + std::uint64_t(t));
            QuantumState stc = st;
            int fired = run_trajectory(terms[t].reduced, stc, trng, bits);
            vals[s][t] = (firedPrefix == 0 && fired == 0)
                             ? terms[t].idealValue
                             : expectation(stc, terms[t].observable);
        }
    }
    return mc_finish(std::move(r), spec, vals, M, seed, streamOut);
}

}  // namespace

EstimateReport run_monte_carlo(const EstimatorSpec& spec, long M, std::uint64_t seed,
                               SampleStream* streamOut) {
    spec.observable.validate(spec.N);
    if (M <= 0 || M % 100 != 0)
        throw std::invalid_argument("M must be a positive multiple of 100");
    if (spec.n == 1) return mc_n1(spec, M, seed, streamOut);

    EstimateReport r = base_report(spec, spec.n, "mc");
    VdProgram program = build_vd_program(spec.plan(spec.n));
    int W = program.circuit.width;
    if (W > kStatevectorWidthCap)
        throw std::runtime_error("trajectory width exceeds the statevector cap");

    std::vector<double> clocks(W, 0.0);
    TimedCircuit rawPrefix = slice(program.circuit, 0, program.sigmaEarlyPos);
    TimedCircuit schedPrefix = schedule_noise(rawPrefix, spec.vdModel, spec.prepModel, &clocks);

    auto paulis = term_list(spec.observable, spec.N);
    std::vector<McTerm> terms;
    std::vector<TimedCircuit> rawReduced;
    for (const auto& t : paulis) {
        // the controlled-sigma precedes the derangement, so the per-term
        // circuit carries everything from the end of the copy preparations
        TimedCircuit tc =
            slice(program.circuit, program.sigmaEarlyPos, program.circuit.events.size());
        auto cs = controlled_sigma_events(t, program.ancControl, program.dataOffset);
        tc.events.insert(tc.events.begin(), cs.begin(), cs.end());
        auto [rawRed, rawObs] = insert_artificial_gates(tc, program.rule);
        rawReduced.push_back(std::move(rawRed));
        std::vector<double> cl = clocks;
        TimedCircuit sched = schedule_noise(tc, spec.vdModel, spec.prepModel, &cl);
        auto [reduced, obsZ] = insert_artificial_gates(sched, program.rule);
        McTerm mt;
        mt.reduced = std::move(reduced);
        mt.observable = std::move(obsZ);
        terms.push_back(std::move(mt));
    }

    // Error-free shots short-circuit to the noiseless values.  With mid-
    // circuit resets the noiseless outcome is still stochastic, so the
    // cached value is the reset-averaged (density-mode) one.
    bool hasReset = false;
    for (const Event& e : program.circuit.events) hasReset |= e.kind == EventKind::Reset;
    bool cacheOk = true;
    if (!hasReset) {
        QuantumState st0 = QuantumState::zero_state(W, StateKind::Statevector);
        Rng dummy(0);
        std::vector<int> bits;
        run_trajectory(rawPrefix, st0, dummy, bits);
        for (std::size_t t = 0; t < terms.size(); ++t) {
            QuantumState st = st0;
            run_trajectory(rawReduced[t], st, dummy, bits);
            terms[t].idealValue = expectation(st, terms[t].observable);
        }
    } else if (W <= kDensityWidthCap) {
        QuantumState st0 = QuantumState::zero_state(W, StateKind::Density);
        run_density(rawPrefix, st0);
        for (std::size_t t = 0; t < terms.size(); ++t) {
            QuantumState st = st0;
            run_density(rawReduced[t], st);
            terms[t].idealValue = expectation(st, terms[t].observable);
        }
    } else {
        cacheOk = false;
    }

    std::vector<std::vector<double>> vals(M, std::vector<double>(terms.size(), 0.0));
    for (long s = 0; s < M; ++s) {
        Rng prng = Rng::derived(seed, std::uint64_t(s), 0);
        QuantumState st = QuantumState::zero_state(W, StateKind::Statevector);
        std::vector<int> bits(program.circuit.numBits, 0);
        int firedPrefix = run_trajectory(schedPrefix, st, prng, bits);
        for (std::size_t t = 0; t < terms.size(); ++t) {
            Rng trng = Rng::derived(seed, std::uint64_t(s), 100 + std::uint64_t(t));
            QuantumState stc = st;
            std::vector<int> tb = bits;
            int fired = run_trajectory(terms[t].reduced, stc, trng, tb);
            vals[s][t] = (cacheOk && firedPrefix == 0 && fired == 0)
                             ? terms[t].idealValue
                             : expectation(stc, terms[t].observable);
        }
    }
    return mc_finish(std::move(r), spec, vals, M, seed, streamOut);
}

std::vector<EstimateReport> run_sweep(const SweepSpec& spec) {
    if (spec.prep.N != spec.N)
        throw std::invalid_argument("preparation width must equal the sweep's N");
    spec.observable.validate(spec.N);
    if (spec.ns.empty()) throw std::invalid_argument("sweep needs a non-empty n list");
    if (spec.cs.empty()) throw std::invalid_argument("sweep needs a non-empty c list");
    TimedCircuit statePrep = build_trotter_circuit(spec.prep);

    std::vector<EstimateReport> out;
    std::uint64_t cell = 0;
    for (double c : spec.cs) {
        ScaledModel sm;
        sm.base = spec.baseModel;
        sm.c = c;
        sm.scaleP1Q = spec.scaleP1Q;
        sm.scaleP2Q = spec.scaleP2Q;
        sm.scalePBell = spec.scalePBell;
        NoiseModel scaled = sm.apply();

        EstimatorSpec es;
        es.impl = spec.impl;
        es.N = spec.N;
        es.statePrep = statePrep;
        es.observable = spec.observable;
        es.prepModel = scaled;
        es.vdModel = spec.noiseInPrepOnly ? NoiseModel::zero() : scaled;
        es.chargeNetworkIdle = spec.chargeNetworkIdle;

        if (spec.engine == "oracle") {
            QuantumState prep = noisy_prep_density(statePrep, es.prepModel);
            std::string warn;
            double ref = dominant_reference(prep.rho, spec.observable, &warn);
            for (int n : spec.ns) {
                EstimateReport r;
                r.impl = spec.impl;
                r.n = n;
                r.N = spec.N;
                r.c = c;
                r.mode = "oracle";
                r.reference = ref;
                r.notes = warn;
                r.ratio = ideal_vd_oracle(prep.rho, spec.observable, n);
                r.numeratorMean = r.ratio;
                r.deltaE = std::abs(r.ratio - ref);
                out.push_back(std::move(r));
                ++cell;
            }
        } else if (spec.engine == "exact") {
            auto rs = run_exact_range(es, spec.ns);
            for (auto& rr : rs) {
                rr.c = c;
                out.push_back(std::move(rr));
                ++cell;
            }
        } else if (spec.engine == "mc") {
            for (int n : spec.ns) {
                es.n = n;
                std::uint64_t cellSeed = Rng::mix(spec.seed, cell);
                EstimateReport rr = run_monte_carlo(es, spec.M, cellSeed);
                rr.c = c;
                out.push_back(std::move(rr));
                ++cell;
            }
        } else {
            throw std::invalid_argument("engine must be exact, mc or oracle");
        }
    }
    return out;
}

}  // namespace vdnet
