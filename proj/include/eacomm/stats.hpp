#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "eacomm/common.hpp"
#include "eacomm/scenario.hpp"
#include "eacomm/seesaw.hpp"

namespace eacomm {

struct Event {
    int x = 0;
    int y = 0;
    int b = 0;
};

// Draws independent rounds: the setting (x, y) from settingProb (uniform when
// empty), the outcome from the behavior's conditional distribution.
inline std::vector<Event> simulate_events(const Behavior& behavior, std::uint64_t n,
                                          std::uint64_t seed,
                                          const std::vector<double>& settingProb = {}) {
    if (n == 0) throw ValidationError("simulate_events: need at least one round");
    const Scenario& s = behavior.scenario;
    std::vector<double> pxy = settingProb;
    if (pxy.empty()) pxy.assign(static_cast<std::size_t>(s.nX) * s.nY, 1.0 / (s.nX * s.nY));
    if (pxy.size() != static_cast<std::size_t>(s.nX) * s.nY)
        throw ValidationError("simulate_events: setting distribution has wrong length");
    double total = 0.0;
    for (double p : pxy) {
        if (p < 0) throw ValidationError("simulate_events: negative setting probability");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw ValidationError("simulate_events: setting distribution does not sum to one");
    for (int x = 0; x < s.nX; ++x)
        for (int y = 0; y < s.nY; ++y)
            for (int b = 0; b < s.nB; ++b)
                if (!behavior.has(x, y, b))
                    throw ValidationError("simulate_events: behavior is missing cells");

    detail::SeesawRng rng(seed);
    std::vector<Event> events;
    events.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        const double u = rng.uniform();
        double acc = 0.0;
        int setting = static_cast<int>(pxy.size()) - 1;
        for (std::size_t k = 0; k < pxy.size(); ++k) {
            acc += pxy[k];
            if (u < acc) {
                setting = static_cast<int>(k);
                break;
            }
        }
        const int x = setting / s.nY;
        const int y = setting % s.nY;
        const double v = rng.uniform();
        double cum = 0.0;
        int outcome = s.nB - 1;
        for (int b = 0; b < s.nB; ++b) {
            cum += behavior.at(x, y, b);
            if (v < cum) {
                outcome = b;
                break;
            }
        }
        events.push_back({x, y, outcome});
    }
    return events;
}

// Unbiased score estimate: each round contributes its coefficient weighted by
// the inverse setting probability, so the mean matches evaluate() on the
// underlying behavior.
inline double estimate_score(const GameFunctional& functional, const std::vector<Event>& events,
                             const std::vector<double>& settingProb = {}) {
    if (events.empty()) throw ValidationError("estimate_score: empty event stream");
    const Scenario& s = functional.scenario;
    std::vector<double> pxy = settingProb;
    if (pxy.empty()) pxy.assign(static_cast<std::size_t>(s.nX) * s.nY, 1.0 / (s.nX * s.nY));
    if (pxy.size() != static_cast<std::size_t>(s.nX) * s.nY)
        throw ValidationError("estimate_score: setting distribution has wrong length");
    std::vector<std::uint64_t> counts(s.cells(), 0);
    for (const Event& e : events) {
        s.check_indices(e.x, e.y, e.b);
        ++counts[s.index(e.x, e.y, e.b)];
    }
    double sum = 0.0;
    for (int x = 0; x < s.nX; ++x)
        for (int y = 0; y < s.nY; ++y) {
            std::uint64_t settingCount = 0;
            double weighted = 0.0;
            for (int b = 0; b < s.nB; ++b) {
                const std::uint64_t c = counts[s.index(x, y, b)];
                settingCount += c;
                weighted += static_cast<double>(c) * functional.coeff(x, y, b);
            }
            if (settingCount == 0) continue;
            const double p = pxy[static_cast<std::size_t>(x) * s.nY + y];
            if (p <= 0)
                throw ValidationError("estimate_score: event stream hits a zero-probability setting");
            sum += weighted / p;
        }
    return functional.normalization * sum / static_cast<double>(events.size());
}

// One-sided concentration bound exp(-2 n mu^2 / (cMax + tBound)^2) on the
// probability that a classical strategy reaches mu above its bound over n
// rounds. Returns a value in (0, 1]; a nonpositive mu yields the trivial
// bound 1.
inline double azuma_bound(double mu, double n, double cMax, double tBound) {
    if (n < 0) throw std::invalid_argument("azuma_bound: negative round count");
    const double denom = cMax + tBound;
    if (denom <= 0) throw std::invalid_argument("azuma_bound: cMax + tBound must be positive");
    if (mu <= 0) return 1.0;
    return std::exp(-2.0 * n * mu * mu / (denom * denom));
}

// Base-10 logarithm of the same bound, usable when the bound itself
// underflows to zero.
inline double azuma_log10_bound(double mu, double n, double cMax, double tBound) {
    if (n < 0) throw std::invalid_argument("azuma_bound: negative round count");
    const double denom = cMax + tBound;
    if (denom <= 0) throw std::invalid_argument("azuma_bound: cMax + tBound must be positive");
    if (mu <= 0) return 0.0;
    return -2.0 * n * mu * mu / (denom * denom) / std::log(10.0);
}

inline double sigma_violation(double score, double bound, double error) {
    if (error <= 0) throw std::invalid_argument("sigma_violation: error must be positive");
    return (score - bound) / error;
}

// Measured probability table in behavior CSV form; completeness is only
// enforced on settings whose outcome row set is complete, at experimental
// precision.
inline Behavior ingest_results_table(const std::string& path, const Scenario& scenario) {
    Behavior behavior = read_behavior_csv(path, scenario);
    behavior.validate(0.02);
    return behavior;
}

inline Behavior ingest_results_table(std::istream& in, const Scenario& scenario) {
    Behavior behavior = read_behavior_csv(in, scenario);
    behavior.validate(0.02);
    return behavior;
}

struct CertifyParams {
    double bound = 0.0;
    double rounds = 0.0;
    double error = 0.0;
    double cMax = 1.0;
    double tBound = 0.0;
};

struct CertifyResult {
    double score = 0.0;
    double bound = 0.0;
    double mu = 0.0;
    double error = 0.0;
    double rounds = 0.0;
    double sigmaViolation = 0.0;
    double pValueUpperBound = 1.0;
    double log10PValueUpperBound = 0.0;
};

inline CertifyResult certify(const GameFunctional& functional, const Behavior& measured,
                             const CertifyParams& params) {
    CertifyResult result;
    result.score = evaluate(functional, measured);
    result.bound = params.bound;
    result.mu = result.score - params.bound;
    result.error = params.error;
    result.rounds = params.rounds;
    result.sigmaViolation = sigma_violation(result.score, params.bound, params.error);
    result.pValueUpperBound = azuma_bound(result.mu, params.rounds, params.cMax, params.tBound);
    result.log10PValueUpperBound =
        azuma_log10_bound(result.mu, params.rounds, params.cMax, params.tBound);
    return result;
}

}  // namespace eacomm
