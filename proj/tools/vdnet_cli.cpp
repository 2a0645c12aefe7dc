#include <cmath>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "vdnet/config.hpp"

namespace {

using namespace vdnet;

void write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    f << text;
}

// Runs the sweep cell-by-cell so one failing cell doesn't abort the grid.
std::vector<EstimateReport> run_sweep_tolerant(const SweepSpec& spec) {
    try {
        return run_sweep(spec);
    } catch (const std::exception&) {
        // fall through to per-cell evaluation
    }
    std::vector<EstimateReport> out;
    for (double c : spec.cs)
        for (int n : spec.ns) {
            SweepSpec cell = spec;
            cell.cs = {c};
            cell.ns = {n};
            try {
                auto rs = run_sweep(cell);
                out.insert(out.end(), rs.begin(), rs.end());
            } catch (const std::exception& e) {
                EstimateReport r;
                r.impl = spec.impl;
                r.n = n;
                r.N = spec.N;
                r.c = c;
                r.mode = spec.engine;
                r.ratio = std::nan("");
                r.deltaE = std::nan("");
                r.notes = std::string("error: ") + e.what();
                out.push_back(std::move(r));
            }
        }
    return out;
}

int cmd_run(const std::string& configPath, const std::string& outOverride,
            std::uint64_t seedOverride, bool seedSet, const std::string& modeOverride,
            bool noTimestamp) {
    ExperimentConfig cfg = load_config(configPath);
    if (seedSet) cfg.sweep.seed = seedOverride;
    if (!modeOverride.empty()) cfg.sweep.engine = modeOverride;
    cfg.validate();
    std::string outPath = outOverride.empty() ? cfg.outPath : outOverride;

    auto reports = run_sweep_tolerant(cfg.sweep);
    for (const auto& r : reports) {
        std::cerr << impl_name(r.impl) << " n=" << r.n << " N=" << r.N << " c=" << r.c
                  << " " << r.mode << " ratio=" << r.ratio << " deltaE=" << r.deltaE;
        if (!r.notes.empty()) std::cerr << " [" << r.notes << "]";
        std::cerr << "\n";
    }
    write_output(reports_to_csv(reports, !noTimestamp), outPath);
    return 0;
}

int cmd_resources(const std::string& implName, int nMin, int nMax, int NMin, int NMax,
                  const std::string& modeName, const std::string& outPath,
                  bool noTimestamp) {
    std::vector<Impl> impls;
    if (implName == "all")
        impls = {Impl::CR, Impl::QECR, Impl::BW};
    else
        impls = {impl_from_name(implName)};
    std::vector<ResourceMode> modes;
    if (modeName == "table") modes = {ResourceMode::Table};
    else if (modeName == "as-built") modes = {ResourceMode::AsBuilt};
    else if (modeName == "both") modes = {ResourceMode::Table, ResourceMode::AsBuilt};
    else throw std::invalid_argument("--mode must be table, as-built or both");
    if (nMin < 1 || nMax < nMin || NMin < 1 || NMax < NMin)
        throw std::invalid_argument("invalid n/N ranges");

    std::vector<ResourceReport> rows;
    for (Impl impl : impls)
        for (int n = nMin; n <= nMax; ++n)
            for (int N = NMin; N <= NMax; ++N)
                for (ResourceMode mode : modes)
                    rows.push_back(count_resources(impl, n, N, mode));
    write_output(resources_to_csv(rows, !noTimestamp), outPath);
    return 0;
}

int cmd_validate(const std::string& topoPath, const std::string& implName, int n) {
    Topology available = load_topology(topoPath);
    Impl impl = impl_from_name(implName);
    Topology required = required_topology(impl, n);
    auto deficiencies = validate_topology(available, required);
    if (deficiencies.empty()) {
        std::cout << "ok: topology supports " << impl_name(impl) << " with n=" << n << "\n";
        return 0;
    }
    std::cout << "deficient: " << deficiencies.size() << " problem(s)\n";
    for (const auto& d : deficiencies) std::cout << "  " << d << "\n";
    return 1;
}

int cmd_scaling(const std::string& configPath, std::uint64_t seedOverride, bool seedSet,
                const std::string& outPath, bool noTimestamp) {
    ExperimentConfig cfg = load_config(configPath);
    if (seedSet) cfg.sweep.seed = seedOverride;
    if (cfg.scalingMs.size() < 4)
        throw std::invalid_argument("config field 'Ms': scaling needs >= 4 shot counts");
    if (cfg.sweep.ns.size() != 1 || cfg.sweep.cs.size() != 1)
        throw std::invalid_argument("scaling expects a single (n, c) cell");

    SweepSpec s = cfg.sweep;
    s.engine = "mc";
    std::vector<EstimateReport> reports;
    std::vector<double> Ms, errs;
    for (long M : cfg.scalingMs) {
        s.M = M;
        auto rs = run_sweep(s);
        Ms.push_back(double(M));
        errs.push_back(rs.front().stdError);
        reports.push_back(rs.front());
    }
    LinearFit fit = scaling_fit(Ms, errs);
    std::string csv = reports_to_csv(reports, !noTimestamp);
    std::ostringstream os;
    os << csv << "# fit slope=" << fit.slope << " intercept=" << fit.intercept
       << " sd10=" << std::pow(10.0, fit.intercept) << "\n";
    write_output(os.str(), outPath);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"virtual-distillation network simulator"};
    app.require_subcommand(1);

    std::string configPath, outPath, modeOverride, implName = "all", topoPath;
    std::uint64_t seed = 0;
    bool noTimestamp = false;
    int nMin = 2, nMax = 8, NMin = 1, NMax = 8, n = 2, jobs = 1;
    std::string resourceMode = "table";

    auto* run = app.add_subcommand("run", "run a sweep from a config file");
    run->add_option("--config", configPath, "experiment config (JSON)")->required();
    run->add_option("--out", outPath, "output CSV path (default: stdout)");
    auto* seedOpt = run->add_option("--seed", seed, "override the config seed");
    run->add_option("--mode", modeOverride, "override the engine (exact|mc|oracle)");
    run->add_option("--jobs", jobs, "worker count (cells run serially when 1)");
    run->add_flag("--no-timestamp", noTimestamp, "suppress the timestamp header");

    auto* res = app.add_subcommand("resources", "emit resource-count CSV");
    res->add_option("--impl", implName, "CR|QECR|BW|all");
    res->add_option("--n-min", nMin);
    res->add_option("--n-max", nMax);
    res->add_option("--N-min", NMin);
    res->add_option("--N-max", NMax);
    res->add_option("--mode", resourceMode, "table|as-built|both");
    res->add_option("--out", outPath);
    res->add_flag("--no-timestamp", noTimestamp);

    auto* val = app.add_subcommand("validate", "check a topology file against an implementation");
    val->add_option("--topology", topoPath, "topology file")->required();
    val->add_option("--impl", implName, "CR|QECR|BW")->required();
    val->add_option("--n", n, "copies")->required();

    auto* sca = app.add_subcommand("scaling", "Monte Carlo error-scaling fit over Ms");
    sca->add_option("--config", configPath, "experiment config with an Ms array")->required();
    auto* seedOpt2 = sca->add_option("--seed", seed, "override the config seed");
    sca->add_option("--out", outPath);
    sca->add_flag("--no-timestamp", noTimestamp);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (run->parsed())
            return cmd_run(configPath, outPath, seed, seedOpt->count() > 0, modeOverride,
                           noTimestamp);
        if (res->parsed())
            return cmd_resources(implName, nMin, nMax, NMin, NMax, resourceMode, outPath,
                                 noTimestamp);
        if (val->parsed()) return cmd_validate(topoPath, implName, n);
        if (sca->parsed())
            return cmd_scaling(configPath, seed, seedOpt2->count() > 0, outPath, noTimestamp);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
