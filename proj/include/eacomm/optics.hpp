#pragma once

#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "eacomm/common.hpp"
#include "eacomm/protocols.hpp"
#include "eacomm/qcore.hpp"
#include "eacomm/scenario.hpp"
#include "eacomm/seesaw.hpp"

namespace eacomm {

// Wave-plate angles are degrees (taken mod 180), phase-shifter parameters
// are radians.
enum class OpticalElementKind { HWP, QWP, PHASE };

struct OpticalElement {
    OpticalElementKind kind = OpticalElementKind::HWP;
    double param = 0.0;
};

namespace detail {

inline Eigen::Matrix2d rot2(double rad) {
    Eigen::Matrix2d r;
    r << std::cos(rad), -std::sin(rad), std::sin(rad), std::cos(rad);
    return r;
}

inline double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }

}  // namespace detail

inline Mat2 element_unitary(const OpticalElement& element) {
    switch (element.kind) {
        case OpticalElementKind::HWP: {
            const double t = detail::deg2rad(std::fmod(element.param, 180.0));
            return detail::rot2(t) * Eigen::Vector2cd(1, -1).asDiagonal() * detail::rot2(-t);
        }
        case OpticalElementKind::QWP: {
            const double t = detail::deg2rad(std::fmod(element.param, 180.0));
            return detail::rot2(-t) * Eigen::Vector2cd(1, C(0, -1)).asDiagonal() * detail::rot2(t);
        }
        case OpticalElementKind::PHASE:
            return Eigen::Vector2cd(1, std::exp(C(0, element.param))).asDiagonal();
    }
    throw ValidationError("element_unitary: unknown element kind");
}

// Elements are listed in arrival order, so the compiled unitary applies the
// first listed element rightmost.
inline Mat2 compile_circuit(const std::vector<OpticalElement>& elements) {
    Mat2 u = Mat2::Identity();
    for (const OpticalElement& element : elements) u = element_unitary(element) * u;
    return u;
}

struct WavePlateCircuit {
    std::vector<OpticalElement> elements;
    Mat2 compile() const { return compile_circuit(elements); }
};

// Half-wave plate at theta (degrees) followed by a phase shifter acting on
// the second mode: [[cos 2t, sin 2t], [e^{i phi} sin 2t, -e^{i phi} cos 2t]].
inline Mat2 combined_hwp_phase(double thetaDeg, double phi) {
    const double t = 2 * detail::deg2rad(thetaDeg);
    Mat2 u;
    u << std::cos(t), std::sin(t), std::exp(C(0, phi)) * std::sin(t),
        -std::exp(C(0, phi)) * std::cos(t);
    return u;
}

inline std::vector<OpticalElement> read_circuit_csv(std::istream& in) {
    std::vector<OpticalElement> elements;
    std::string line;
    int lineNo = 0;
    bool sawContent = false;
    while (std::getline(in, line)) {
        ++lineNo;
        std::string trimmed;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) trimmed += c;
        if (trimmed.empty() || trimmed[0] == '#') continue;
        if (!sawContent) {
            sawContent = true;
            if (trimmed.rfind("element,", 0) == 0) continue;
        }
        const auto comma = trimmed.find(',');
        if (comma == std::string::npos)
            throw ValidationError("circuit csv line " + std::to_string(lineNo) +
                                  ": expected element,param");
        const std::string name = trimmed.substr(0, comma);
        OpticalElement element;
        if (name == "HWP") element.kind = OpticalElementKind::HWP;
        else if (name == "QWP") element.kind = OpticalElementKind::QWP;
        else if (name == "PHASE") element.kind = OpticalElementKind::PHASE;
        else
            throw ValidationError("circuit csv line " + std::to_string(lineNo) +
                                  ": unknown element '" + name + "'");
        try {
            std::size_t used = 0;
            element.param = std::stod(trimmed.substr(comma + 1), &used);
            if (used != trimmed.size() - comma - 1) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw ValidationError("circuit csv line " + std::to_string(lineNo) +
                                  ": bad parameter value");
        }
        elements.push_back(element);
    }
    return elements;
}

inline std::vector<OpticalElement> read_circuit_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open circuit file: " + path);
    return read_circuit_csv(in);
}

namespace detail {

// Tabulated wave-plate settings for the sender and receiver stations. Rows
// follow the input ordering of the corresponding protocol.
struct Table1Row { double phi, theta; };
struct Table4Row { double phi, h1, q1, h2, q2; };
struct Table5Row { double m1h1, m1q1, m2q1, m2h1, m2q2; };

inline const std::array<Table1Row, 5>& table1() {
    static const std::array<Table1Row, 5> rows = {{{std::numbers::pi, 0},
                                                   {0, 15},
                                                   {0, -30},
                                                   {std::numbers::pi, -30},
                                                   {std::numbers::pi, 30}}};
    return rows;
}

inline const std::array<Table1Row, 6>& table2() {
    static const std::array<Table1Row, 6> rows = {{{std::numbers::pi, 0},
                                                   {std::numbers::pi, 7.5},
                                                   {std::numbers::pi, -7.5},
                                                   {0, 15},
                                                   {0, -30},
                                                   {std::numbers::pi, -22.5}}};
    return rows;
}

inline const std::array<Table4Row, 8>& table4() {
    static const std::array<Table4Row, 8> rows = {{
        {std::numbers::pi, -8.816, 45, 33.75, 45},
        {0, -8.816, 45, -78.75, 45},
        {0, -8.816, 45, -33.75, 45},
        {std::numbers::pi, -8.816, 45, 78.75, 45},
        {std::numbers::pi, 53.816, 45, 33.75, 45},
        {0, 53.816, 45, -78.75, 45},
        {0, 53.816, 45, -33.75, 45},
        {std::numbers::pi, 53.816, 45, 78.75, 45},
    }};
    return rows;
}

inline const std::array<Table5Row, 3>& table5() {
    static const std::array<Table5Row, 3> rows = {{
        {0, 0, 0, 0, 0},
        {0, -45, 0, 15, 0},
        {22.5, 0, 0, 30, 0},
    }};
    return rows;
}

inline std::vector<OpticalElement> table4_circuit(const Table4Row& row) {
    return {{OpticalElementKind::PHASE, row.phi + std::numbers::pi},
            {OpticalElementKind::HWP, row.h1},
            {OpticalElementKind::QWP, row.q1},
            {OpticalElementKind::HWP, row.h2},
            {OpticalElementKind::QWP, row.q2}};
}

// Each analyser arm realizes the +/-1 observable A^dagger sigma_Z A of the
// plates A in front of the polarizing splitter.
inline Mat2 arm_observable(const std::vector<OpticalElement>& elements) {
    const Mat2 a = compile_circuit(elements);
    return a.adjoint() * pauli('Z') * a;
}

inline Mat2 table5_mode1(const Table5Row& row) {
    return arm_observable({{OpticalElementKind::HWP, row.m1h1}, {OpticalElementKind::QWP, row.m1q1}});
}

inline Mat2 table5_mode2(const Table5Row& row) {
    return arm_observable({{OpticalElementKind::QWP, row.m2q1},
                           {OpticalElementKind::HWP, row.m2h1},
                           {OpticalElementKind::QWP, row.m2q2}});
}

}  // namespace detail

// Exact first half-wave-plate angle behind the printed three-decimal values
// in the sender settings: the plate angle encodes the amplitude
// alpha_0 = sqrt(1 + sqrt(2/3))/2 of the compiled column.
inline double table4_exact_h1(int x1) {
    const double alpha0 = 0.5 * std::sqrt(1 + std::sqrt(2.0 / 3.0));
    const double base = -(std::acos(std::sqrt(2.0) * alpha0) * 180.0 / std::numbers::pi) / 2;
    if (x1 == 0) return base;
    if (x1 == 1) return 45.0 - base;
    throw ValidationError("table4_exact_h1: x1 must be 0 or 1");
}

struct SettingsCheck {
    int table = 0;
    int row = 0;
    double distance = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::string note;
};

// Compares every tabulated settings row against the analytic protocol it
// implements. Tables 1 and 2 are exact angles, tables 4 and 5 are printed to
// three decimals, hence the looser threshold.
inline std::vector<SettingsCheck> verify_settings_tables() {
    std::vector<SettingsCheck> checks;
    const auto senderS = detail::s_sender_unitaries();
    for (std::size_t i = 0; i < detail::table1().size(); ++i) {
        const auto& row = detail::table1()[i];
        const double d = distance_up_to_phase(combined_hwp_phase(row.theta, row.phi), senderS[i]);
        checks.push_back({1, static_cast<int>(i + 1), d, 1e-6, d <= 1e-6, ""});
    }
    const auto receiverS = detail::s_receiver_unitaries();
    for (std::size_t i = 0; i < detail::table2().size(); ++i) {
        const auto& row = detail::table2()[i];
        const double d = distance_up_to_phase(combined_hwp_phase(row.theta, row.phi), receiverS[i]);
        checks.push_back({2, static_cast<int>(i + 1), d, 1e-6, d <= 1e-6, ""});
    }
    for (std::size_t i = 0; i < detail::table4().size(); ++i) {
        const Mat2 compiled = compile_circuit(detail::table4_circuit(detail::table4()[i]));
        const Mat2 target = detail::t_sender_unitary((i >> 2) & 1, (i >> 1) & 1, i & 1);
        const double d = distance_up_to_phase(compiled, target);
        checks.push_back({4, static_cast<int>(i + 1), d, 1e-2, d <= 1e-2, ""});
    }
    const auto observables = detail::t_observables();
    for (std::size_t i = 0; i < detail::table5().size(); ++i) {
        const Mat2 o1 = detail::table5_mode1(detail::table5()[i]);
        const Mat2 o2 = detail::table5_mode2(detail::table5()[i]);
        const double dDirect = (tensor(o1, o2) - observables[i]).norm();
        const double dSwapped = (tensor(o2, o1) - observables[i]).norm();
        const bool direct = dDirect <= dSwapped;
        const double d = direct ? dDirect : dSwapped;
        checks.push_back({5, static_cast<int>(i + 1), d, 1e-2, d <= 1e-2,
                          direct ? "modes direct" : "modes swapped"});
    }
    return checks;
}

struct NoiseReport {
    std::string task;
    double sigmaDeg = 0.0;
    int samples = 0;
    double mean = 0.0;
    double stddev = 0.0;
    double ideal = 0.0;
};

namespace detail {

inline EAQProtocol noisy_protocol_S(SeesawRng& rng, double sigmaDeg) {
    EAQProtocol p;
    p.label = "S";
    p.shared = phi_plus();
    for (const auto& row : table1())
        p.senderUnitaries.push_back(combined_hwp_phase(row.theta + sigmaDeg * rng.gauss(), row.phi));
    for (const auto& row : table2()) {
        const Mat2 u = combined_hwp_phase(row.theta + sigmaDeg * rng.gauss(), row.phi);
        const Vec4 e = tensor(u, Mat2::Identity()) * phi_plus();
        const Mat4 proj = e * e.adjoint();
        p.measurements.push_back({proj, Mat4::Identity() - proj});
    }
    return p;
}

inline EAQProtocol noisy_protocol_T(SeesawRng& rng, double sigmaDeg) {
    EAQProtocol p;
    p.label = "T";
    p.shared = phi_plus();
    for (const auto& row : table4()) {
        auto circuit = table4_circuit(row);
        for (OpticalElement& element : circuit)
            if (element.kind != OpticalElementKind::PHASE) element.param += sigmaDeg * rng.gauss();
        p.senderUnitaries.push_back(compile_circuit(circuit));
    }
    for (const auto& row : table5()) {
        std::vector<OpticalElement> arm1 = {{OpticalElementKind::HWP, row.m1h1},
                                            {OpticalElementKind::QWP, row.m1q1}};
        std::vector<OpticalElement> arm2 = {{OpticalElementKind::QWP, row.m2q1},
                                            {OpticalElementKind::HWP, row.m2h1},
                                            {OpticalElementKind::QWP, row.m2q2}};
        for (OpticalElement& element : arm1) element.param += sigmaDeg * rng.gauss();
        for (OpticalElement& element : arm2) element.param += sigmaDeg * rng.gauss();
        const Mat4 o = tensor(arm_observable(arm1), arm_observable(arm2));
        p.measurements.push_back({(Mat4::Identity() + o) / 2, (Mat4::Identity() - o) / 2});
    }
    return p;
}

}  // namespace detail

// Samples the game score with independent Gaussian jitter of the given
// standard deviation on every wave-plate angle. Phase-shifter settings are
// left untouched.
inline NoiseReport monte_carlo_angle_noise(char task, double sigmaDeg, int samples,
                                           std::uint64_t seed) {
    if (samples < 1) throw ValidationError("monte_carlo_angle_noise: samples must be positive");
    if (sigmaDeg < 0) throw ValidationError("monte_carlo_angle_noise: sigma must be nonnegative");
    if (task != 'S' && task != 'T')
        throw ValidationError("monte_carlo_angle_noise: task must be S or T");
    const GameFunctional functional = task == 'S' ? functional_S() : functional_RAC(3, 2);
    NoiseReport report;
    report.task = std::string(1, task);
    report.sigmaDeg = sigmaDeg;
    report.samples = samples;
    report.ideal = evaluate(functional, behavior_from_protocol(
                                            task == 'S' ? protocol_S() : protocol_T()));
    std::vector<double> scores(samples);
    detail::parallel_for(samples, [&](std::size_t i) {
        detail::SeesawRng rng(detail::derive_seed(seed, i));
        const EAQProtocol p = task == 'S' ? detail::noisy_protocol_S(rng, sigmaDeg)
                                          : detail::noisy_protocol_T(rng, sigmaDeg);
        scores[i] = evaluate(functional, behavior_from_protocol(p));
    });
    double mean = 0.0;
    for (double s : scores) mean += s;
    mean /= samples;
    double var = 0.0;
    for (double s : scores) var += (s - mean) * (s - mean);
    report.mean = mean;
    report.stddev = std::sqrt(var / samples);
    return report;
}

}  // namespace eacomm
