#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "eacomm/common.hpp"

namespace eacomm {

// Indices are 0-based in code; the CSV/JSON interchange formats are 1-based
// to line up with the measured-table fixtures.
struct Scenario {
    int nX = 0;
    int nY = 0;
    int nB = 0;

    bool operator==(const Scenario&) const = default;

    int cells() const { return nX * nY * nB; }
    int index(int x, int y, int b) const { return (x * nY + y) * nB + b; }

    void check_indices(int x, int y, int b) const {
        if (x < 0 || x >= nX || y < 0 || y >= nY || b < 0 || b >= nB)
            throw ValidationError("scenario index out of range");
    }
};

// Conditional probability table p(b|x,y). Cells may be absent for ingested
// experimental data, where only some outcomes were reported.
struct Behavior {
    Scenario scenario;
    std::vector<double> p;
    std::vector<double> err;
    std::vector<bool> present;

    explicit Behavior(const Scenario& s)
        : scenario(s), p(s.cells(), 0.0), err(s.cells(), 0.0), present(s.cells(), false) {}

    double& at(int x, int y, int b) {
        scenario.check_indices(x, y, b);
        return p[scenario.index(x, y, b)];
    }
    double at(int x, int y, int b) const {
        scenario.check_indices(x, y, b);
        return p[scenario.index(x, y, b)];
    }
    bool has(int x, int y, int b) const { return present[scenario.index(x, y, b)]; }

    void set(int x, int y, int b, double prob, double error = 0.0) {
        scenario.check_indices(x, y, b);
        const int i = scenario.index(x, y, b);
        p[i] = prob;
        err[i] = error;
        present[i] = true;
    }

    // Probabilities in range; complete (x,y) cells must be normalized.
    // completenessTol is 1e-9 for generated behaviors and 0.02 for ingested
    // tables, where reported outcomes of a question may not sum exactly to 1.
    void validate(double completenessTol = kTolAlgebra) const {
        for (int i = 0; i < scenario.cells(); ++i) {
            if (!present[i]) continue;
            if (p[i] < -kTolAlgebra || p[i] > 1.0 + kTolAlgebra)
                throw ValidationError("behavior probability outside [0,1]");
        }
        for (int x = 0; x < scenario.nX; ++x)
            for (int y = 0; y < scenario.nY; ++y) {
                double sum = 0.0;
                bool complete = true;
                for (int b = 0; b < scenario.nB; ++b) {
                    const int i = scenario.index(x, y, b);
                    complete = complete && present[i];
                    sum += p[i];
                }
                if (complete && std::abs(sum - 1.0) > completenessTol)
                    throw ValidationError("outcome distribution not normalized at (x=" +
                                          std::to_string(x + 1) + ",y=" + std::to_string(y + 1) + ")");
            }
    }
};

// Linear figure of merit: score = normalization × Σ c_{b,x,y} p(b|x,y).
// The normalization is kept separate so the raw game score S and the averaged
// success rates R, T coexist without rescaling coefficients.
struct GameFunctional {
    Scenario scenario;
    std::vector<double> c;
    double normalization = 1.0;
    std::string label;

    explicit GameFunctional(const Scenario& s, std::string lbl = "")
        : scenario(s), c(s.cells(), 0.0), label(std::move(lbl)) {}

    double& coeff(int x, int y, int b) {
        scenario.check_indices(x, y, b);
        return c[scenario.index(x, y, b)];
    }
    double coeff(int x, int y, int b) const {
        scenario.check_indices(x, y, b);
        return c[scenario.index(x, y, b)];
    }
};

// 5×6 coefficient matrix of the game S, attached to the first outcome ("+1").
inline GameFunctional functional_S() {
    static constexpr int kCoeff[5][6] = {
        {1, 1, 1, 0, 0, 0},
        {-1, 0, 0, 1, 0, 0},
        {-1, 0, 0, -1, 1, 0},
        {0, -1, 0, -1, -1, 1},
        {0, 0, -1, -1, -1, -1},
    };
    GameFunctional f(Scenario{5, 6, 2}, "S");
    for (int x = 0; x < 5; ++x)
        for (int y = 0; y < 6; ++y)
            f.coeff(x, y, 0) = kCoeff[x][y];
    return f;
}

// Digit y of input x, with x read as nData base-nValues digits, first digit
// most significant. Shared by the RAC functionals and the protocol builders.
inline int rac_digit(int x, int y, int nData, int nValues) {
    int div = 1;
    for (int k = 0; k < nData - 1 - y; ++k) div *= nValues;
    return (x / div) % nValues;
}

// Random access code: the receiver must output digit y of the sender's input;
// score is the success rate averaged uniformly over (x, y).
inline GameFunctional functional_RAC(int nData, int nValues) {
    if (nData < 1 || nValues < 2) throw ValidationError("functional_RAC: need nData ≥ 1, nValues ≥ 2");
    long long nX = 1;
    for (int k = 0; k < nData; ++k) {
        nX *= nValues;
        if (nX > 1'000'000) throw ValidationError("functional_RAC: input alphabet overflow");
    }
    Scenario s{static_cast<int>(nX), nData, nValues};
    char name[32];
    std::snprintf(name, sizeof(name), "RAC(%d,%d)", nData, nValues);
    GameFunctional f(s, name);
    f.normalization = 1.0 / (static_cast<double>(s.nX) * s.nY);
    for (int x = 0; x < s.nX; ++x)
        for (int y = 0; y < s.nY; ++y)
            f.coeff(x, y, rac_digit(x, y, nData, nValues)) = 1.0;
    return f;
}

inline double evaluate(const GameFunctional& f, const Behavior& behavior) {
    if (!(f.scenario == behavior.scenario))
        throw ValidationError("evaluate: functional and behavior scenarios differ");
    double sum = 0.0;
    for (int i = 0; i < f.scenario.cells(); ++i) {
        if (f.c[i] == 0.0) continue;
        if (!behavior.present[i])
            throw ValidationError("evaluate: behavior is missing a cell with nonzero coefficient");
        sum += f.c[i] * behavior.p[i];
    }
    return f.normalization * sum;
}

// Behavior CSV: header "x,y,b,p[,err]", one row per reported cell, 1-based
// indices. Fixture files for the experimental tables use this format.
inline Behavior read_behavior_csv(std::istream& in, const Scenario& scenario) {
    Behavior behavior(scenario);
    std::string line;
    int lineno = 0;
    bool sawHeader = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (!sawHeader) {
            sawHeader = true;
            if (line.rfind("x,", 0) == 0) continue;  // header row
        }
        std::istringstream row(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (fields.size() != 4 && fields.size() != 5)
            throw ValidationError("behavior CSV line " + std::to_string(lineno) + ": expected 4 or 5 fields");
        try {
            const int x = std::stoi(fields[0]) - 1;
            const int y = std::stoi(fields[1]) - 1;
            const int b = std::stoi(fields[2]) - 1;
            const double prob = std::stod(fields[3]);
            const double error = fields.size() == 5 ? std::stod(fields[4]) : 0.0;
            if (prob < 0.0 || prob > 1.0)
                throw ValidationError("probability outside [0,1]");
            behavior.set(x, y, b, prob, error);
        } catch (const std::exception& e) {
            throw ValidationError("behavior CSV line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (!sawHeader) throw ValidationError("behavior CSV: empty input");
    return behavior;
}

inline Behavior read_behavior_csv(const std::string& path, const Scenario& scenario) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open behavior CSV: " + path);
    return read_behavior_csv(in, scenario);
}

inline void write_behavior_csv(std::ostream& out, const Behavior& behavior) {
    const bool anyErr = [&] {
        for (double e : behavior.err)
            if (e != 0.0) return true;
        return false;
    }();
    out << (anyErr ? "x,y,b,p,err\n" : "x,y,b,p\n");
    const Scenario& s = behavior.scenario;
    char buf[64];
    for (int x = 0; x < s.nX; ++x)
        for (int y = 0; y < s.nY; ++y)
            for (int b = 0; b < s.nB; ++b) {
                if (!behavior.has(x, y, b)) continue;
                std::snprintf(buf, sizeof(buf), "%.12g", behavior.at(x, y, b));
                out << x + 1 << ',' << y + 1 << ',' << b + 1 << ',' << buf;
                if (anyErr) {
                    std::snprintf(buf, sizeof(buf), "%.12g", behavior.err[s.index(x, y, b)]);
                    out << ',' << buf;
                }
                out << '\n';
            }
}

}  // namespace eacomm
