#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "eacomm/classical.hpp"
#include "eacomm/common.hpp"
#include "eacomm/optics.hpp"
#include "eacomm/protocols.hpp"
#include "eacomm/qcore.hpp"
#include "eacomm/scenario.hpp"
#include "eacomm/seesaw.hpp"
#include "eacomm/stats.hpp"

namespace eacomm {

using Json = nlohmann::ordered_json;

namespace detail {

template <typename M>
inline Json reals(const M& m) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            a.push_back(m(i, j).real());
            a.push_back(m(i, j).imag());
        }
    return a;
}

template <typename M>
inline M from_reals(const Json& a, Eigen::Index rows, Eigen::Index cols, const char* what) {
    if (!a.is_array() || a.size() != static_cast<std::size_t>(2 * rows * cols))
        throw ValidationError(std::string("protocol json: bad entry count for ") + what);
    M m(rows, cols);
    std::size_t k = 0;
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) {
            const double re = a[k++].get<double>();
            const double im = a[k++].get<double>();
            m(i, j) = C(re, im);
        }
    return m;
}

}  // namespace detail

inline Json protocol_to_json(const EAQProtocol& protocol) {
    Json j;
    j["schema"] = kSchemaVersion;
    j["label"] = protocol.label;
    j["shared"] = detail::reals(Eigen::Matrix<C, 4, 1>(protocol.shared));
    Json unitaries = Json::array();
    for (const Mat2& u : protocol.senderUnitaries) unitaries.push_back(detail::reals(u));
    j["unitaries"] = unitaries;
    Json effects = Json::array();
    for (const auto& povm : protocol.measurements) {
        Json perY = Json::array();
        for (const Mat4& e : povm) perY.push_back(detail::reals(e));
        effects.push_back(perY);
    }
    j["effects"] = effects;
    return j;
}

inline EAQProtocol protocol_from_json(const Json& j) {
    EAQProtocol p;
    p.label = j.value("label", std::string());
    p.shared = detail::from_reals<Eigen::Matrix<C, 4, 1>>(j.at("shared"), 4, 1, "shared");
    for (const Json& u : j.at("unitaries"))
        p.senderUnitaries.push_back(detail::from_reals<Mat2>(u, 2, 2, "unitary"));
    for (const Json& perY : j.at("effects")) {
        std::vector<Mat4> povm;
        for (const Json& e : perY) povm.push_back(detail::from_reals<Mat4>(e, 4, 4, "effect"));
        p.measurements.push_back(povm);
    }
    p.validate();
    return p;
}

inline Json bound_to_json(const BoundResult& bound) {
    Json j;
    j["schema"] = kSchemaVersion;
    j["value"] = bound.value;
    j["d"] = bound.d;
    j["enumeratedSide"] = bound.enumeratedSide;
    j["count"] = bound.count;
    Json encoder = Json::array();
    for (int m : bound.witness.encoder) encoder.push_back(m + 1);
    Json decoders = Json::array();
    for (const auto& dec : bound.witness.decoders) {
        Json row = Json::array();
        for (int b : dec) row.push_back(b + 1);
        decoders.push_back(row);
    }
    j["witness"] = Json{{"encoder", encoder}, {"decoders", decoders}};
    return j;
}

inline Json seesaw_to_json(const SeesawResult& result, const SeesawConfig& config) {
    Json j;
    j["schema"] = kSchemaVersion;
    j["value"] = result.value;
    j["converged"] = result.converged;
    j["iterations"] = result.iterations;
    j["restarts"] = config.restarts;
    j["seed"] = config.seed;
    j["perRestartValues"] = result.perRestartValues;
    j["protocol"] = protocol_to_json(result.protocol);
    return j;
}

inline Json ent_bit_to_json(const EntBitResult& result, const SeesawConfig& config) {
    Json j;
    j["schema"] = kSchemaVersion;
    j["value"] = result.value;
    j["converged"] = result.converged;
    j["iterations"] = result.iterations;
    j["restarts"] = config.restarts;
    j["seed"] = config.seed;
    j["perRestartValues"] = result.perRestartValues;
    Json strategy;
    strategy["shared"] = detail::reals(Eigen::Matrix<C, 4, 1>(result.strategy.shared));
    Json sender = Json::array();
    for (const auto& povm : result.strategy.senderEffects) {
        Json perX = Json::array();
        for (const Mat2& f : povm) perX.push_back(detail::reals(f));
        sender.push_back(perX);
    }
    strategy["senderEffects"] = sender;
    Json receiver = Json::array();
    for (const auto& perY : result.strategy.receiverEffects) {
        Json byMessage = Json::array();
        for (const auto& povm : perY) {
            Json byOutcome = Json::array();
            for (const Mat2& e : povm) byOutcome.push_back(detail::reals(e));
            byMessage.push_back(byOutcome);
        }
        receiver.push_back(byMessage);
    }
    strategy["receiverEffects"] = receiver;
    j["strategy"] = strategy;
    return j;
}

inline Json sweep_to_json(const SweepResult& result, const std::string& task) {
    Json j;
    j["schema"] = kSchemaVersion;
    j["task"] = task;
    j["thetas"] = result.thetas;
    j["values"] = result.values;
    j["threshold"] = result.threshold;
    if (result.crossing) j["crossing"] = *result.crossing;
    else j["crossing"] = nullptr;
    return j;
}

inline Json settings_report_to_json(const std::vector<SettingsCheck>& checks) {
    Json j;
    j["schema"] = kSchemaVersion;
    Json rows = Json::array();
    bool all = true;
    for (const SettingsCheck& check : checks) {
        Json row;
        row["table"] = check.table;
        row["row"] = check.row;
        row["distance"] = check.distance;
        row["threshold"] = check.threshold;
        row["pass"] = check.pass;
        if (!check.note.empty()) row["note"] = check.note;
        rows.push_back(row);
        all = all && check.pass;
    }
    j["checks"] = rows;
    j["allPass"] = all;
    return j;
}

inline Json noise_to_json(const NoiseReport& report) {
    Json j;
    j["schema"] = kSchemaVersion;
    j["task"] = report.task;
    j["sigmaDeg"] = report.sigmaDeg;
    j["samples"] = report.samples;
    j["mean"] = report.mean;
    j["std"] = report.stddev;
    j["ideal"] = report.ideal;
    return j;
}

inline Json certify_to_json(const CertifyResult& result, const std::string& task) {
    Json j;
    j["schema"] = kSchemaVersion;
    j["task"] = task;
    j["score"] = result.score;
    j["bound"] = result.bound;
    j["mu"] = result.mu;
    j["error"] = result.error;
    j["sigmaViolation"] = result.sigmaViolation;
    j["pValueUpperBound"] = result.pValueUpperBound;
    j["log10PValueUpperBound"] = result.log10PValueUpperBound;
    j["N"] = result.rounds;
    return j;
}

}  // namespace eacomm
