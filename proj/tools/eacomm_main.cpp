#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "eacomm/classical.hpp"
#include "eacomm/optics.hpp"
#include "eacomm/protocols.hpp"
#include "eacomm/seesaw.hpp"
#include "eacomm/serialize.hpp"
#include "eacomm/stats.hpp"

namespace {

using eacomm::Json;

struct TaskSpec {
    std::string name;
    eacomm::GameFunctional functional;
    eacomm::EAQProtocol protocol;
};

TaskSpec make_task(const std::string& name) {
    if (name == "R") return {"R", eacomm::functional_RAC(2, 4), eacomm::protocol_R()};
    if (name == "S") return {"S", eacomm::functional_S(), eacomm::protocol_S()};
    if (name == "T") return {"T", eacomm::functional_RAC(3, 2), eacomm::protocol_T()};
    throw eacomm::ValidationError("unknown task '" + name + "' (expected R, S, or T)");
}

void emit(const Json& j, const std::string& outPath) {
    const std::string text = j.dump(2) + "\n";
    if (outPath.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(outPath);
    if (!out) throw eacomm::ValidationError("cannot open output file: " + outPath);
    out << text;
}

std::vector<double> parse_theta_grid(const std::string& spec) {
    const auto c1 = spec.find(':');
    const auto c2 = spec.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw eacomm::ValidationError("theta grid must have the form a:b:n");
    double a = 0, b = 0;
    long n = 0;
    try {
        a = std::stod(spec.substr(0, c1));
        b = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
        n = std::stol(spec.substr(c2 + 1));
    } catch (const std::exception&) {
        throw eacomm::ValidationError("theta grid must have the form a:b:n");
    }
    if (n < 1) throw eacomm::ValidationError("theta grid needs at least one point");
    std::vector<double> grid;
    if (n == 1) {
        grid.push_back(a);
        return grid;
    }
    for (long i = 0; i < n; ++i)
        grid.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    return grid;
}

eacomm::SeesawRestriction parse_restriction(const std::string& spec) {
    eacomm::SeesawRestriction r;
    if (spec.empty()) return r;
    if (spec == "product") {
        r.kind = eacomm::SeesawRestriction::Kind::ProductMeasurements;
        return r;
    }
    if (spec == "entbit") {
        r.kind = eacomm::SeesawRestriction::Kind::ClassicalBitMessage;
        return r;
    }
    if (spec.rfind("theta=", 0) == 0) {
        r.kind = eacomm::SeesawRestriction::Kind::PartialEntanglement;
        try {
            r.theta = std::stod(spec.substr(6));
        } catch (const std::exception&) {
            throw eacomm::ValidationError("bad theta value in --restrict");
        }
        return r;
    }
    throw eacomm::ValidationError("unknown restriction '" + spec +
                                  "' (expected product, entbit, or theta=<x>)");
}

struct CertifyDefaults {
    double bound, rounds, error, cMax, tBound;
};

std::optional<CertifyDefaults> certify_defaults(const std::string& task) {
    if (task == "S") return CertifyDefaults{5.0, 5.4e8, 0.009, 30.0, 9.0};
    if (task == "T") return CertifyDefaults{5.0 / 6.0, 4.32e8, 0.003, 1.0, -1.0 / 6.0};
    return std::nullopt;
}

struct ReproduceCheck {
    std::string name;
    bool pass;
    std::string detail;
};

int run_reproduce(bool check, std::uint64_t seed, const std::string& dataDir, int restarts,
                  const std::string& outPath) {
    Json out;
    out["schema"] = eacomm::kSchemaVersion;
    out["seed"] = seed;
    std::vector<ReproduceCheck> checks;
    auto expect = [&](const std::string& name, bool pass, const std::string& detail) {
        checks.push_back({name, pass, detail});
    };
    auto near = [](double v, double target, double tol) { return std::abs(v - target) <= tol; };

    const double quantumR = 0.75;
    const double quantumS = 3.0 + 3.0 * std::sqrt(3.0) / 2.0;
    const double quantumT = 0.5 + 1.0 / std::sqrt(6.0);
    const double boundsR[3] = {7.0 / 16.0, 5.0 / 8.0, 21.0 / 32.0};
    const double boundsS[3] = {3.0, 5.0, 6.0};
    const double boundsT[3] = {3.0 / 4.0, 5.0 / 6.0, 7.0 / 8.0};
    const double entBitFloor[3] = {0.4633, 3.795, 0.787};
    const double quantum[3] = {quantumR, quantumS, quantumT};

    Json tasks;
    const std::vector<std::string> names = {"R", "S", "T"};
    for (std::size_t t = 0; t < names.size(); ++t) {
        const TaskSpec task = make_task(names[t]);
        const double* pinned = t == 0 ? boundsR : (t == 1 ? boundsS : boundsT);
        Json row;
        const int ds[3] = {2, 4, 5};
        const char* keys[3] = {"oneBitBound", "twoBitBound", "fiveSymbolBound"};
        double bounds[3];
        for (int k = 0; k < 3; ++k) {
            bounds[k] = eacomm::max_classical_value(task.functional, ds[k]).value;
            row[keys[k]] = bounds[k];
        }
        eacomm::SeesawConfig cfg;
        cfg.restarts = restarts;
        cfg.seed = seed;
        const double entBit = eacomm::seesaw_ent_bit(task.functional, cfg).value;
        row["entBitSeesaw"] = entBit;
        const double q =
            eacomm::evaluate(task.functional, eacomm::behavior_from_protocol(task.protocol));
        row["quantumValue"] = q;

        std::optional<double> experimental;
        const std::string tablePath =
            dataDir + "/" + (names[t] == "S" ? "table3.csv" : "table6.csv");
        if (names[t] != "R" && std::filesystem::exists(tablePath)) {
            const eacomm::Behavior measured =
                eacomm::ingest_results_table(tablePath, task.functional.scenario);
            experimental = eacomm::evaluate(task.functional, measured);
        }
        if (experimental) row["experimentalValue"] = *experimental;
        else row["experimentalValue"] = nullptr;
        tasks[names[t]] = row;

        if (check) {
            for (int k = 0; k < 3; ++k)
                expect(names[t] + "." + keys[k], near(bounds[k], pinned[k], 1e-9),
                       "expected " + std::to_string(pinned[k]) + ", got " +
                           std::to_string(bounds[k]));
            expect(names[t] + ".quantumValue", near(q, quantum[t], 1e-9),
                   "expected " + std::to_string(quantum[t]) + ", got " + std::to_string(q));
            expect(names[t] + ".entBitSeesaw",
                   entBit >= entBitFloor[t] && entBit <= quantum[t] + 1e-6,
                   "expected within [" + std::to_string(entBitFloor[t]) + ", quantum], got " +
                       std::to_string(entBit));
            if (names[t] == "S")
                expect("S.experimentalValue", experimental && near(*experimental, 5.378, 1e-3),
                       experimental ? "got " + std::to_string(*experimental) : "table missing");
            if (names[t] == "T")
                expect("T.experimentalValue", experimental && near(*experimental, 0.8988, 1e-4),
                       experimental ? "got " + std::to_string(*experimental) : "table missing");
        }
    }
    out["tasks"] = tasks;
    bool ok = true;
    if (check) {
        Json rows = Json::array();
        for (const ReproduceCheck& c : checks) {
            Json row;
            row["name"] = c.name;
            row["pass"] = c.pass;
            if (!c.pass) row["detail"] = c.detail;
            rows.push_back(row);
            ok = ok && c.pass;
        }
        out["checks"] = rows;
        out["allPass"] = ok;
    }
    emit(out, outPath);
    if (check && !ok) {
        for (const ReproduceCheck& c : checks)
            if (!c.pass) std::cerr << "check failed: " << c.name << " (" << c.detail << ")\n";
        return 3;
    }
    return 0;
}

int run(int argc, char** argv) {
    CLI::App app{"Entanglement-assisted communication toolkit"};
    app.require_subcommand(1);
    std::string outPath;

    auto* evalCmd = app.add_subcommand("eval", "Evaluate a protocol's game score");
    std::string evalTask;
    double visibility = 1.0;
    evalCmd->add_option("task", evalTask, "Task name (R, S, T)")->required();
    evalCmd->add_option("--visibility", visibility, "Isotropic-noise visibility in [0,1]");
    evalCmd->add_option("--out", outPath, "Write JSON to this file instead of stdout");

    auto* boundCmd = app.add_subcommand("bound", "Exact d-valued classical bound");
    std::string boundTask, boundSide = "auto";
    int boundD = 0;
    double budget = 1e9;
    boundCmd->add_option("task", boundTask, "Task name (R, S, T)")->required();
    boundCmd->add_option("--d", boundD, "Message alphabet size")->required();
    boundCmd->add_option("--side", boundSide, "Enumeration side: auto, encoders, decoders");
    boundCmd->add_option("--budget", budget, "Largest enumeration allowed");
    boundCmd->add_option("--out", outPath, "Write JSON to this file instead of stdout");

    auto* seesawCmd = app.add_subcommand("seesaw", "Alternating optimization of a task");
    std::string seesawTask, restrictSpec;
    eacomm::SeesawConfig seesawCfg;
    seesawCmd->add_option("task", seesawTask, "Task name (R, S, T)")->required();
    seesawCmd->add_option("--restrict", restrictSpec, "product, entbit, or theta=<x>");
    seesawCmd->add_option("--restarts", seesawCfg.restarts, "Random restarts");
    seesawCmd->add_option("--seed", seesawCfg.seed, "Base seed");
    seesawCmd->add_option("--max-iters", seesawCfg.maxIters, "Iteration cap per restart");
    seesawCmd->add_option("--tol", seesawCfg.tol, "Convergence tolerance");
    seesawCmd->add_option("--out", outPath, "Write JSON to this file instead of stdout");

    auto* sweepCmd = app.add_subcommand("sweep", "Partial-entanglement sweep");
    std::string sweepTask, gridSpec;
    eacomm::SeesawConfig sweepCfg;
    double sweepThreshold = std::numeric_limits<double>::quiet_NaN();
    sweepCmd->add_option("task", sweepTask, "Task name (R, S, T)")->required();
    sweepCmd->add_option("--theta-grid", gridSpec, "Grid a:b:n of Schmidt angles")->required();
    sweepCmd->add_option("--threshold", sweepThreshold,
                         "Crossing threshold (default: two-bit classical bound)");
    sweepCmd->add_option("--restarts", sweepCfg.restarts, "Random restarts per grid point");
    sweepCmd->add_option("--seed", sweepCfg.seed, "Base seed");
    sweepCmd->add_option("--out", outPath, "Write JSON to this file instead of stdout");

    auto* statsCmd = app.add_subcommand("stats", "Statistics utilities");
    statsCmd->require_subcommand(1);
    auto* certifyCmd = statsCmd->add_subcommand("certify", "Certify a measured table");
    std::string certifyTask, tablePath;
    double roundsOpt = -1, errorOpt = -1, boundOpt = std::numeric_limits<double>::quiet_NaN();
    double cMaxOpt = std::numeric_limits<double>::quiet_NaN();
    double tBoundOpt = std::numeric_limits<double>::quiet_NaN();
    certifyCmd->add_option("--table", tablePath, "Measured behavior CSV")->required();
    certifyCmd->add_option("--task", certifyTask, "Task name (R, S, T)")->required();
    certifyCmd->add_option("--rounds", roundsOpt, "Number of experimental rounds");
    certifyCmd->add_option("--error", errorOpt, "Aggregate standard error of the score");
    certifyCmd->add_option("--bound", boundOpt, "Classical bound to certify against");
    certifyCmd->add_option("--cmax", cMaxOpt, "Largest per-round increment");
    certifyCmd->add_option("--tbound", tBoundOpt, "Increment offset in the exponent denominator");
    certifyCmd->add_option("--out", outPath, "Write JSON to this file instead of stdout");

    auto* opticsCmd = app.add_subcommand("optics", "Wave-plate models");
    opticsCmd->require_subcommand(1);
    auto* verifyCmd = opticsCmd->add_subcommand("verify", "Check the tabulated settings against the protocols");
    verifyCmd->add_option("--out", outPath, "Write JSON to this file instead of stdout");
    auto* compileCmd = opticsCmd->add_subcommand("compile", "Compile an element list");
    std::string circuitPath;
    compileCmd->add_option("--circuit", circuitPath, "CSV with element,param rows")->required();
    compileCmd->add_option("--out", outPath, "Write JSON to this file instead of stdout");
    auto* mcCmd = opticsCmd->add_subcommand("mc", "Monte Carlo angle-noise study");
    std::string mcTask = "S";
    double sigmaDeg = 0.0;
    int samples = 1000;
    std::uint64_t mcSeed = 1;
    mcCmd->add_option("--task", mcTask, "Task name (S or T)");
    mcCmd->add_option("--sigma", sigmaDeg, "Angle noise in degrees")->required();
    mcCmd->add_option("--samples", samples, "Number of samples");
    mcCmd->add_option("--seed", mcSeed, "Base seed");
    mcCmd->add_option("--out", outPath, "Write JSON to this file instead of stdout");

    auto* reproduceCmd = app.add_subcommand("reproduce", "Headline numbers for all tasks");
    bool checkFlag = false;
    std::uint64_t reproduceSeed = 1;
    std::string dataDir = "data";
    int reproduceRestarts = 24;
    reproduceCmd->add_flag("--check", checkFlag, "Compare against pinned expectations");
    reproduceCmd->add_option("--seed", reproduceSeed, "Base seed for the see-saw runs");
    reproduceCmd->add_option("--data-dir", dataDir, "Directory with measured tables");
    reproduceCmd->add_option("--restarts", reproduceRestarts, "See-saw restarts");
    reproduceCmd->add_option("--out", outPath, "Write JSON to this file instead of stdout");

    CLI11_PARSE(app, argc, argv);

    if (evalCmd->parsed()) {
        const TaskSpec task = make_task(evalTask);
        const double score = eacomm::evaluate(
            task.functional, eacomm::behavior_from_protocol(task.protocol, visibility));
        Json j;
        j["schema"] = eacomm::kSchemaVersion;
        j["task"] = task.name;
        j["visibility"] = visibility;
        j["score"] = score;
        emit(j, outPath);
        return 0;
    }
    if (boundCmd->parsed()) {
        const TaskSpec task = make_task(boundTask);
        eacomm::EnumerationSide side = eacomm::EnumerationSide::Auto;
        if (boundSide == "encoders") side = eacomm::EnumerationSide::Encoders;
        else if (boundSide == "decoders") side = eacomm::EnumerationSide::Decoders;
        else if (boundSide != "auto")
            throw eacomm::ValidationError("unknown --side (expected auto, encoders, decoders)");
        const eacomm::BoundResult bound =
            eacomm::max_classical_value(task.functional, boundD, side, budget);
        Json j = eacomm::bound_to_json(bound);
        j["task"] = task.name;
        emit(j, outPath);
        return 0;
    }
    if (seesawCmd->parsed()) {
        const TaskSpec task = make_task(seesawTask);
        seesawCfg.restriction = parse_restriction(restrictSpec);
        Json j;
        if (seesawCfg.restriction.kind == eacomm::SeesawRestriction::Kind::ClassicalBitMessage) {
            const eacomm::EntBitResult result = eacomm::seesaw_ent_bit(task.functional, seesawCfg);
            j = eacomm::ent_bit_to_json(result, seesawCfg);
        } else {
            const eacomm::SeesawResult result = eacomm::seesaw_eaq(task.functional, seesawCfg);
            j = eacomm::seesaw_to_json(result, seesawCfg);
        }
        j["task"] = task.name;
        emit(j, outPath);
        return 0;
    }
    if (sweepCmd->parsed()) {
        const TaskSpec task = make_task(sweepTask);
        const std::vector<double> grid = parse_theta_grid(gridSpec);
        double threshold = sweepThreshold;
        if (std::isnan(threshold))
            threshold = eacomm::max_classical_value(task.functional, 4).value;
        const eacomm::SweepResult result =
            eacomm::sweep_partial_entanglement(task.functional, grid, threshold, sweepCfg);
        emit(eacomm::sweep_to_json(result, task.name), outPath);
        return 0;
    }
    if (certifyCmd->parsed()) {
        const TaskSpec task = make_task(certifyTask);
        const auto defaults = certify_defaults(task.name);
        eacomm::CertifyParams params;
        if (defaults) {
            params.bound = defaults->bound;
            params.rounds = defaults->rounds;
            params.error = defaults->error;
            params.cMax = defaults->cMax;
            params.tBound = defaults->tBound;
        } else {
            if (roundsOpt <= 0 || errorOpt <= 0)
                throw eacomm::ValidationError(
                    "task R has no default experiment; provide --rounds and --error");
            params.bound = 5.0 / 8.0;
            params.cMax = 1.0;
            params.tBound = 0.0;
        }
        if (roundsOpt > 0) params.rounds = roundsOpt;
        if (errorOpt > 0) params.error = errorOpt;
        if (!std::isnan(boundOpt)) params.bound = boundOpt;
        if (!std::isnan(cMaxOpt)) params.cMax = cMaxOpt;
        if (!std::isnan(tBoundOpt)) params.tBound = tBoundOpt;
        const eacomm::Behavior measured =
            eacomm::ingest_results_table(tablePath, task.functional.scenario);
        const eacomm::CertifyResult result = eacomm::certify(task.functional, measured, params);
        emit(eacomm::certify_to_json(result, task.name), outPath);
        return 0;
    }
    if (verifyCmd->parsed()) {
        emit(eacomm::settings_report_to_json(eacomm::verify_settings_tables()), outPath);
        return 0;
    }
    if (compileCmd->parsed()) {
        const std::vector<eacomm::OpticalElement> elements = eacomm::read_circuit_csv(circuitPath);
        const eacomm::Mat2 u = eacomm::compile_circuit(elements);
        Json j;
        j["schema"] = eacomm::kSchemaVersion;
        j["elements"] = elements.size();
        j["unitary"] = eacomm::detail::reals(u);
        emit(j, outPath);
        return 0;
    }
    if (mcCmd->parsed()) {
        if (mcTask != "S" && mcTask != "T")
            throw eacomm::ValidationError("optics mc supports tasks S and T");
        const eacomm::NoiseReport report =
            eacomm::monte_carlo_angle_noise(mcTask[0], sigmaDeg, samples, mcSeed);
        emit(eacomm::noise_to_json(report), outPath);
        return 0;
    }
    if (reproduceCmd->parsed())
        return run_reproduce(checkFlag, reproduceSeed, dataDir, reproduceRestarts, outPath);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const eacomm::BudgetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
