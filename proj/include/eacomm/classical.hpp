#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "eacomm/common.hpp"
#include "eacomm/scenario.hpp"

namespace eacomm {

// Deterministic d-valued classical strategy: a message per input and, for
// each question, an outcome per message.
struct ClassicalStrategy {
    std::vector<int> encoder;
    std::vector<std::vector<int>> decoders;
};

struct BoundResult {
    double value = 0.0;
    int d = 0;
    ClassicalStrategy witness;
    std::string enumeratedSide;
    std::uint64_t count = 0;
};

enum class EnumerationSide { Auto, Encoders, Decoders };

inline double verify_strategy(const GameFunctional& functional, int d,
                              const ClassicalStrategy& strategy) {
    const Scenario& s = functional.scenario;
    if (d < 1) throw ValidationError("verify_strategy: d must be positive");
    if (static_cast<int>(strategy.encoder.size()) != s.nX)
        throw ValidationError("verify_strategy: encoder length does not match nX");
    if (static_cast<int>(strategy.decoders.size()) != s.nY)
        throw ValidationError("verify_strategy: decoder count does not match nY");
    for (int m : strategy.encoder)
        if (m < 0 || m >= d) throw ValidationError("verify_strategy: message out of range");
    for (const auto& dec : strategy.decoders) {
        if (static_cast<int>(dec.size()) != d)
            throw ValidationError("verify_strategy: decoder table length does not match d");
        for (int b : dec)
            if (b < 0 || b >= s.nB) throw ValidationError("verify_strategy: outcome out of range");
    }
    double total = 0.0;
    for (int x = 0; x < s.nX; ++x)
        for (int y = 0; y < s.nY; ++y)
            total += functional.coeff(x, y, strategy.decoders[y][strategy.encoder[x]]);
    return functional.normalization * total;
}

namespace detail {

inline std::uint64_t ipow_u64(std::uint64_t base, int exp) {
    std::uint64_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

// Digits of index in the given base, most significant digit first.
inline void unrank(std::uint64_t index, std::uint64_t base, std::vector<int>& digits) {
    for (std::size_t k = digits.size(); k-- > 0;) {
        digits[k] = static_cast<int>(index % base);
        index /= base;
    }
}

struct EnumerationBest {
    double value = -std::numeric_limits<double>::infinity();
    std::uint64_t index = 0;
};

// Runs scorer over [0, total) in fixed chunks and returns the best score,
// ties resolved toward the smallest index. Chunk results are merged in order,
// so the outcome does not depend on the thread count.
template <typename Scorer>
inline EnumerationBest enumerate_best(std::uint64_t total, const Scorer& makeScorer) {
    constexpr std::uint64_t kChunk = 1 << 14;
    const std::size_t chunks = static_cast<std::size_t>((total + kChunk - 1) / kChunk);
    std::vector<EnumerationBest> perChunk(chunks);
    parallel_for(chunks, [&](std::size_t c) {
        auto scorer = makeScorer();
        EnumerationBest best;
        const std::uint64_t lo = static_cast<std::uint64_t>(c) * kChunk;
        const std::uint64_t hi = std::min(total, lo + kChunk);
        for (std::uint64_t i = lo; i < hi; ++i) {
            const double v = scorer(i);
            if (v > best.value) best = {v, i};
        }
        perChunk[c] = best;
    });
    EnumerationBest best;
    best.index = total;
    for (const EnumerationBest& b : perChunk)
        if (b.value > best.value || (b.value == best.value && b.index < best.index)) best = b;
    return best;
}

}  // namespace detail

// Best score over d-valued classical strategies, found by exhausting the
// cheaper of the two sides (encoders: d^nX, decoders: nB^(d*nY)) and
// optimizing the other side pointwise. The witness is the lexicographically
// smallest maximizer of the enumerated side.
inline BoundResult max_classical_value(const GameFunctional& functional, int d,
                                       EnumerationSide side = EnumerationSide::Auto,
                                       double budget = 1e9) {
    const Scenario& s = functional.scenario;
    if (d < 1) throw ValidationError("max_classical_value: d must be positive");
    const double encCost = std::pow(static_cast<double>(d), s.nX);
    const double decCost = std::pow(static_cast<double>(s.nB), static_cast<double>(d) * s.nY);
    auto overBudget = [&]() -> BudgetError {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "enumeration exceeds budget %.6g: encoder side %.6g strategies, "
                      "decoder side %.6g strategies",
                      budget, encCost, decCost);
        return BudgetError(buf);
    };
    bool useDecoders;
    switch (side) {
        case EnumerationSide::Encoders:
            if (encCost > budget) throw overBudget();
            useDecoders = false;
            break;
        case EnumerationSide::Decoders:
            if (decCost > budget) throw overBudget();
            useDecoders = true;
            break;
        default:
            if (encCost > budget && decCost > budget) throw overBudget();
            if (decCost > budget) useDecoders = false;
            else if (encCost > budget) useDecoders = true;
            else useDecoders = decCost <= encCost;
    }

    BoundResult result;
    result.d = d;
    if (!useDecoders) {
        result.enumeratedSide = "encoders";
        result.count = detail::ipow_u64(static_cast<std::uint64_t>(d), s.nX);
        // For a fixed encoder the optimal decoders decouple: per (y, m) pick
        // the outcome with the largest accumulated coefficient.
        auto makeScorer = [&] {
            return [&functional, &s, d, enc = std::vector<int>(s.nX),
                    acc = std::vector<double>(static_cast<std::size_t>(d) * s.nB)](
                       std::uint64_t i) mutable {
                detail::unrank(i, static_cast<std::uint64_t>(d), enc);
                double total = 0.0;
                for (int y = 0; y < s.nY; ++y) {
                    std::fill(acc.begin(), acc.end(), 0.0);
                    for (int x = 0; x < s.nX; ++x)
                        for (int b = 0; b < s.nB; ++b)
                            acc[enc[x] * s.nB + b] += functional.coeff(x, y, b);
                    for (int m = 0; m < d; ++m) {
                        double best = acc[m * s.nB];
                        for (int b = 1; b < s.nB; ++b) best = std::max(best, acc[m * s.nB + b]);
                        total += best;
                    }
                }
                return functional.normalization * total;
            };
        };
        const auto best = detail::enumerate_best(result.count, makeScorer);
        result.value = best.value;
        result.witness.encoder.resize(s.nX);
        detail::unrank(best.index, static_cast<std::uint64_t>(d), result.witness.encoder);
        result.witness.decoders.assign(s.nY, std::vector<int>(d, 0));
        for (int y = 0; y < s.nY; ++y)
            for (int m = 0; m < d; ++m) {
                double bestAcc = -std::numeric_limits<double>::infinity();
                for (int b = 0; b < s.nB; ++b) {
                    double a = 0.0;
                    for (int x = 0; x < s.nX; ++x)
                        if (result.witness.encoder[x] == m) a += functional.coeff(x, y, b);
                    if (a > bestAcc) {
                        bestAcc = a;
                        result.witness.decoders[y][m] = b;
                    }
                }
            }
    } else {
        result.enumeratedSide = "decoders";
        result.count = detail::ipow_u64(static_cast<std::uint64_t>(s.nB), d * s.nY);
        // For fixed decoders the optimal encoder decouples: per input pick the
        // message with the largest summed coefficient across questions.
        auto makeScorer = [&] {
            return [&functional, &s, d,
                    g = std::vector<int>(static_cast<std::size_t>(s.nY) * d)](
                       std::uint64_t i) mutable {
                detail::unrank(i, static_cast<std::uint64_t>(s.nB), g);
                double total = 0.0;
                for (int x = 0; x < s.nX; ++x) {
                    double best = -std::numeric_limits<double>::infinity();
                    for (int m = 0; m < d; ++m) {
                        double v = 0.0;
                        for (int y = 0; y < s.nY; ++y) v += functional.coeff(x, y, g[y * d + m]);
                        best = std::max(best, v);
                    }
                    total += best;
                }
                return functional.normalization * total;
            };
        };
        const auto best = detail::enumerate_best(result.count, makeScorer);
        result.value = best.value;
        std::vector<int> g(static_cast<std::size_t>(s.nY) * d);
        detail::unrank(best.index, static_cast<std::uint64_t>(s.nB), g);
        result.witness.decoders.assign(s.nY, std::vector<int>(d));
        for (int y = 0; y < s.nY; ++y)
            for (int m = 0; m < d; ++m) result.witness.decoders[y][m] = g[y * d + m];
        result.witness.encoder.assign(s.nX, 0);
        for (int x = 0; x < s.nX; ++x) {
            double bestV = -std::numeric_limits<double>::infinity();
            for (int m = 0; m < d; ++m) {
                double v = 0.0;
                for (int y = 0; y < s.nY; ++y) v += functional.coeff(x, y, g[y * d + m]);
                if (v > bestV) {
                    bestV = v;
                    result.witness.encoder[x] = m;
                }
            }
        }
    }
    return result;
}

}  // namespace eacomm
