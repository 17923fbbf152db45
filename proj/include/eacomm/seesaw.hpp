#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "eacomm/common.hpp"
#include "eacomm/protocols.hpp"
#include "eacomm/qcore.hpp"
#include "eacomm/scenario.hpp"

namespace eacomm {

struct SeesawRestriction {
    enum class Kind { None, ProductMeasurements, PartialEntanglement, ClassicalBitMessage };
    Kind kind = Kind::None;
    double theta = 0.0;
};

struct SeesawConfig {
    int restarts = 50;
    int maxIters = 500;
    double tol = 1e-9;
    std::uint64_t seed = 1;
    SeesawRestriction restriction;
};

struct SeesawResult {
    double value = 0.0;
    bool converged = false;
    int iterations = 0;
    std::vector<double> perRestartValues;
    std::vector<double> trace;
    EAQProtocol protocol;
};

// Entanglement plus one classical bit: the sender measures {F_{m|x}} on the
// first factor and announces m; the receiver measures {S_{b|y,m}} on the
// second factor.
struct EntBitStrategy {
    Vec4 shared;
    std::vector<std::vector<Mat2>> senderEffects;
    std::vector<std::vector<std::vector<Mat2>>> receiverEffects;
};

struct EntBitResult {
    double value = 0.0;
    bool converged = false;
    int iterations = 0;
    std::vector<double> perRestartValues;
    std::vector<double> trace;
    EntBitStrategy strategy;
};

inline Behavior behavior_from_ent_bit(const EntBitStrategy& strategy) {
    const int nX = static_cast<int>(strategy.senderEffects.size());
    const int nY = static_cast<int>(strategy.receiverEffects.size());
    const int nB = nY ? static_cast<int>(strategy.receiverEffects[0][0].size()) : 0;
    Behavior behavior(Scenario{nX, nY, nB});
    const Mat4 rho = strategy.shared * strategy.shared.adjoint();
    for (int x = 0; x < nX; ++x)
        for (int y = 0; y < nY; ++y)
            for (int b = 0; b < nB; ++b) {
                double p = 0.0;
                for (int m = 0; m < 2; ++m) {
                    const Mat4 E = tensor(strategy.senderEffects[x][m],
                                          strategy.receiverEffects[y][m][b]);
                    p += (E * rho).trace().real();
                }
                behavior.set(x, y, b, std::max(0.0, p));
            }
    behavior.validate();
    return behavior;
}

namespace detail {

// Uniform and Gaussian draws built directly on the 64-bit stream so results
// do not depend on the standard library's distribution implementations.
struct SeesawRng {
    std::mt19937_64 gen;
    explicit SeesawRng(std::uint64_t seed) : gen(seed) {}
    double uniform() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
    double gauss() {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }
    C cgauss() { return C(gauss(), gauss()); }
};

template <typename M>
inline M pos_projector(const M& h) {
    Eigen::SelfAdjointEigenSolver<M> es(h);
    M p = M::Zero(h.rows(), h.cols());
    for (Eigen::Index i = 0; i < h.rows(); ++i)
        if (es.eigenvalues()(i) > 0)
            p += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
    return p;
}

template <typename M>
inline M psd_sqrt(const M& h) {
    Eigen::SelfAdjointEigenSolver<M> es(h);
    M r = M::Zero(h.rows(), h.cols());
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
        const double lam = std::max(0.0, es.eigenvalues()(i));
        r += std::sqrt(lam) * es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
    }
    return r;
}

template <typename M>
inline M spectral_sign(const M& h) {
    Eigen::SelfAdjointEigenSolver<M> es(h);
    M s = M::Zero(h.rows(), h.cols());
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
        const double sign = es.eigenvalues()(i) > 0 ? 1.0 : -1.0;
        s += sign * es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
    }
    return s;
}

// Exact two-outcome ascent: the optimum of Tr(E_0 G_0) + Tr(E_1 G_1) under
// E_0 + E_1 = 1 is the projector onto the positive part of G_0 - G_1.
// With more outcomes, sweep over pairs; each pair step is the exact optimum
// at fixed sum S, parameterized as E_a = S^{1/2} X S^{1/2} with 0 <= X <= 1.
template <typename M>
inline void update_povm(std::vector<M>& effects, const std::vector<M>& g) {
    const Eigen::Index dim = g[0].rows();
    if (effects.size() == 2) {
        effects[0] = pos_projector<M>(M(g[0] - g[1]));
        effects[1] = M::Identity(dim, dim) - effects[0];
        return;
    }
    for (int sweep = 0; sweep < 3; ++sweep)
        for (std::size_t a = 0; a < effects.size(); ++a)
            for (std::size_t b = a + 1; b < effects.size(); ++b) {
                const M s = effects[a] + effects[b];
                const M root = psd_sqrt<M>(s);
                const M proj = pos_projector<M>(M(root * (g[a] - g[b]) * root));
                effects[a] = root * proj * root;
                effects[b] = root * (M::Identity(dim, dim) - proj) * root;
                effects[a] = (effects[a] + effects[a].adjoint()).eval() / 2;
                effects[b] = (effects[b] + effects[b].adjoint()).eval() / 2;
            }
}

inline Vec4 vec_row(const Mat2& a) {
    Vec4 v;
    v << a(0, 0), a(0, 1), a(1, 0), a(1, 1);
    return v;
}

inline Mat2 su2_from_quaternion(const Eigen::Vector4d& n) {
    return n(0) * Mat2::Identity() +
           C(0, 1) * (n(1) * pauli('X') + n(2) * pauli('Y') + n(3) * pauli('Z'));
}

// Exact sender step: with the shared state's Schmidt matrix D, the evolved
// ket is the row-major vectorization of U D, and over U = sum_k n_k B_k with
// B = (1, i sigma_X, i sigma_Y, i sigma_Z) the objective is the quadratic
// form n^T Q n on the unit sphere, maximized by the top eigenvector of Q.
inline Mat2 best_sender_unitary(const Mat4& m, const Mat2& schmidt) {
    const std::array<Mat2, 4> basis = {Mat2::Identity(), C(0, 1) * pauli('X'),
                                       C(0, 1) * pauli('Y'), C(0, 1) * pauli('Z')};
    std::array<Vec4, 4> beta;
    for (int k = 0; k < 4; ++k) beta[k] = vec_row(basis[k] * schmidt);
    Eigen::Matrix4d q;
    for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) q(k, l) = (beta[k].adjoint() * m * beta[l])(0).real();
    q = ((q + q.transpose()) / 2).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(q);
    return su2_from_quaternion(es.eigenvectors().col(3));
}

inline Mat2 random_observable(SeesawRng& rng) {
    Eigen::Vector3d n(rng.gauss(), rng.gauss(), rng.gauss());
    if (n.norm() < 1e-12) return pauli('Z');
    n.normalize();
    return n(0) * pauli('X') + n(1) * pauli('Y') + n(2) * pauli('Z');
}

inline Mat2 random_su2(SeesawRng& rng) {
    Eigen::Vector4d n(rng.gauss(), rng.gauss(), rng.gauss(), rng.gauss());
    if (n.norm() < 1e-12) n << 1, 0, 0, 0;
    n.normalize();
    return su2_from_quaternion(n);
}

// Rank-one PVM from a Haar-ish random basis, with surplus basis vectors
// folded into the last effect. Used only to seed the pairwise ascent.
inline std::vector<Mat4> random_initial_povm(SeesawRng& rng, int nB) {
    Mat4 ginibre;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) ginibre(i, j) = rng.cgauss();
    const Mat4 qmat = Eigen::HouseholderQR<Mat4>(ginibre).householderQ();
    std::vector<Mat4> effects(nB, Mat4::Zero());
    for (int col = 0; col < 4; ++col) {
        const int slot = std::min(col, nB - 1);
        effects[slot] += qmat.col(col) * qmat.col(col).adjoint();
    }
    return effects;
}

struct EaqRestart {
    double value = -std::numeric_limits<double>::infinity();
    bool converged = false;
    int iterations = 0;
    std::vector<double> trace;
    EAQProtocol protocol;
};

}  // namespace detail

// Alternating maximization of a game functional over entanglement-assisted
// qubit protocols. Every sub-step is an exact maximizer of its block, so the
// objective never decreases between iterations.
inline SeesawResult seesaw_eaq(const GameFunctional& functional, const SeesawConfig& config) {
    const Scenario& sc = functional.scenario;
    const auto kind = config.restriction.kind;
    if (kind == SeesawRestriction::Kind::ClassicalBitMessage)
        throw ValidationError("seesaw_eaq: use seesaw_ent_bit for the classical-bit restriction");
    if (kind == SeesawRestriction::Kind::ProductMeasurements && sc.nB != 2)
        throw ValidationError("seesaw_eaq: product-measurement restriction needs two outcomes");
    if (config.restarts < 1 || config.maxIters < 1)
        throw ValidationError("seesaw_eaq: restarts and maxIters must be positive");
    double theta = std::numbers::pi / 2;
    if (kind == SeesawRestriction::Kind::PartialEntanglement) {
        theta = config.restriction.theta;
        if (theta < 0 || theta > std::numbers::pi / 2 + 1e-12)
            throw ValidationError("seesaw_eaq: theta must lie in [0, pi/2]");
    }
    Mat2 schmidt = Mat2::Zero();
    schmidt(0, 0) = std::cos(theta / 2);
    schmidt(1, 1) = std::sin(theta / 2);
    Vec4 shared = Vec4::Zero();
    shared(0) = schmidt(0, 0).real();
    shared(3) = schmidt(1, 1).real();

    std::vector<detail::EaqRestart> runs(config.restarts);
    detail::parallel_for(config.restarts, [&](std::size_t r) {
        detail::SeesawRng rng(detail::derive_seed(config.seed, r));
        std::vector<Mat2> unitaries(sc.nX);
        for (Mat2& u : unitaries) u = detail::random_su2(rng);
        std::vector<Mat2> obsA(sc.nY), obsB(sc.nY);
        std::vector<std::vector<Mat4>> effects(sc.nY);
        for (int y = 0; y < sc.nY; ++y) {
            if (kind == SeesawRestriction::Kind::ProductMeasurements) {
                obsA[y] = detail::random_observable(rng);
                obsB[y] = detail::random_observable(rng);
                const Mat4 o = tensor(obsA[y], obsB[y]);
                effects[y] = {(Mat4::Identity() + o) / 2, (Mat4::Identity() - o) / 2};
            } else if (sc.nB == 2) {
                effects[y] = {Mat4::Identity() / 2, Mat4::Identity() / 2};
            } else {
                effects[y] = detail::random_initial_povm(rng, sc.nB);
            }
        }

        std::vector<Vec4> kets(sc.nX);
        auto refreshKets = [&] {
            for (int x = 0; x < sc.nX; ++x) kets[x] = detail::vec_row(unitaries[x] * schmidt);
        };
        auto score = [&] {
            double total = 0.0;
            for (int x = 0; x < sc.nX; ++x)
                for (int y = 0; y < sc.nY; ++y)
                    for (int b = 0; b < sc.nB; ++b)
                        total += functional.coeff(x, y, b) *
                                 (kets[x].adjoint() * effects[y][b] * kets[x])(0).real();
            return functional.normalization * total;
        };

        detail::EaqRestart& run = runs[r];
        double prev = -std::numeric_limits<double>::infinity();
        for (int iter = 1; iter <= config.maxIters; ++iter) {
            refreshKets();
            for (int y = 0; y < sc.nY; ++y) {
                std::vector<Mat4> g(sc.nB, Mat4::Zero());
                for (int b = 0; b < sc.nB; ++b)
                    for (int x = 0; x < sc.nX; ++x)
                        g[b] += functional.coeff(x, y, b) * (kets[x] * kets[x].adjoint());
                if (kind == SeesawRestriction::Kind::ProductMeasurements) {
                    const Mat4 d = (g[0] - g[1]) / 2;
                    for (int round = 0; round < 4; ++round) {
                        Mat2 k = Mat2::Zero();
                        for (int i = 0; i < 2; ++i)
                            for (int ip = 0; ip < 2; ++ip)
                                for (int j = 0; j < 2; ++j)
                                    for (int l = 0; l < 2; ++l)
                                        k(i, ip) += obsB[y](j, l) * d(2 * i + l, 2 * ip + j);
                        obsA[y] = detail::spectral_sign(k);
                        Mat2 kb = Mat2::Zero();
                        for (int j = 0; j < 2; ++j)
                            for (int jp = 0; jp < 2; ++jp)
                                for (int i = 0; i < 2; ++i)
                                    for (int l = 0; l < 2; ++l)
                                        kb(j, jp) += obsA[y](i, l) * d(2 * l + j, 2 * i + jp);
                        obsB[y] = detail::spectral_sign(kb);
                    }
                    const Mat4 o = tensor(obsA[y], obsB[y]);
                    effects[y] = {(Mat4::Identity() + o) / 2, (Mat4::Identity() - o) / 2};
                } else {
                    detail::update_povm(effects[y], g);
                }
            }
            for (int x = 0; x < sc.nX; ++x) {
                Mat4 m = Mat4::Zero();
                for (int y = 0; y < sc.nY; ++y)
                    for (int b = 0; b < sc.nB; ++b)
                        m += functional.coeff(x, y, b) * effects[y][b];
                unitaries[x] = detail::best_sender_unitary(m, schmidt);
            }
            refreshKets();
            const double v = score();
            run.trace.push_back(v);
            run.iterations = iter;
            if (v + 1e-9 < prev)
                throw std::logic_error("seesaw_eaq: objective decreased between iterations");
            if (iter > 1 && v - prev < config.tol) {
                run.converged = true;
                prev = v;
                break;
            }
            prev = v;
        }
        run.value = prev;
        run.protocol.shared = shared;
        run.protocol.senderUnitaries = unitaries;
        run.protocol.measurements = effects;
        run.protocol.label = functional.label;
    });

    std::size_t winner = 0;
    for (std::size_t r = 1; r < runs.size(); ++r)
        if (runs[r].value > runs[winner].value) winner = r;
    SeesawResult result;
    result.value = runs[winner].value;
    result.converged = runs[winner].converged;
    result.iterations = runs[winner].iterations;
    result.trace = runs[winner].trace;
    result.protocol = runs[winner].protocol;
    result.perRestartValues.reserve(runs.size());
    for (const auto& run : runs) result.perRestartValues.push_back(run.value);
    return result;
}

namespace detail {

inline Mat2 ptrace_first(const Mat4& m) {
    Mat2 r;
    for (int j = 0; j < 2; ++j)
        for (int l = 0; l < 2; ++l) r(j, l) = m(j, l) + m(2 + j, 2 + l);
    return r;
}

inline Mat2 ptrace_second(const Mat4& m) {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k) r(i, k) = m(2 * i, 2 * k) + m(2 * i + 1, 2 * k + 1);
    return r;
}

struct EntBitRestart {
    double value = -std::numeric_limits<double>::infinity();
    bool converged = false;
    int iterations = 0;
    std::vector<double> trace;
    EntBitStrategy strategy;
};

}  // namespace detail

// Alternating maximization over entanglement-plus-one-classical-bit
// strategies: receiver POVMs per (question, message), then the sender's
// two-outcome POVMs, then the shared state as the top eigenvector of the
// assembled objective operator. All three blocks are exact.
inline EntBitResult seesaw_ent_bit(const GameFunctional& functional, const SeesawConfig& config) {
    const Scenario& sc = functional.scenario;
    if (config.restarts < 1 || config.maxIters < 1)
        throw ValidationError("seesaw_ent_bit: restarts and maxIters must be positive");
    std::vector<detail::EntBitRestart> runs(config.restarts);
    detail::parallel_for(config.restarts, [&](std::size_t r) {
        detail::SeesawRng rng(detail::derive_seed(config.seed, r));
        Vec4 psi;
        for (int i = 0; i < 4; ++i) psi(i) = rng.cgauss();
        psi.normalize();
        std::vector<std::vector<Mat2>> sender(sc.nX);
        for (int x = 0; x < sc.nX; ++x) {
            Vec2 v;
            v << rng.cgauss(), rng.cgauss();
            v.normalize();
            const Mat2 f0 = v * v.adjoint();
            sender[x] = {f0, Mat2::Identity() - f0};
        }
        std::vector<std::vector<std::vector<Mat2>>> receiver(
            sc.nY, std::vector<std::vector<Mat2>>(
                       2, std::vector<Mat2>(sc.nB, Mat2::Identity() / sc.nB)));

        detail::EntBitRestart& run = runs[r];
        double prev = -std::numeric_limits<double>::infinity();
        for (int iter = 1; iter <= config.maxIters; ++iter) {
            const Mat4 rho = psi * psi.adjoint();
            for (int y = 0; y < sc.nY; ++y)
                for (int m = 0; m < 2; ++m) {
                    std::vector<Mat2> g(sc.nB, Mat2::Zero());
                    for (int x = 0; x < sc.nX; ++x) {
                        const Mat2 sigma =
                            detail::ptrace_first(tensor(sender[x][m], Mat2::Identity()) * rho);
                        for (int b = 0; b < sc.nB; ++b)
                            g[b] += functional.coeff(x, y, b) * sigma;
                    }
                    detail::update_povm(receiver[y][m], g);
                }
            std::vector<std::array<Mat2, 2>> weighted(sc.nX);
            for (int x = 0; x < sc.nX; ++x)
                for (int m = 0; m < 2; ++m) {
                    Mat2 s = Mat2::Zero();
                    for (int y = 0; y < sc.nY; ++y)
                        for (int b = 0; b < sc.nB; ++b)
                            s += functional.coeff(x, y, b) * receiver[y][m][b];
                    weighted[x][m] = s;
                }
            for (int x = 0; x < sc.nX; ++x) {
                std::array<Mat2, 2> t;
                for (int m = 0; m < 2; ++m)
                    t[m] = detail::ptrace_second(tensor(Mat2::Identity(), weighted[x][m]) * rho);
                sender[x][0] = detail::pos_projector<Mat2>(Mat2(t[0] - t[1]));
                sender[x][1] = Mat2::Identity() - sender[x][0];
            }
            Mat4 omega = Mat4::Zero();
            for (int x = 0; x < sc.nX; ++x)
                for (int m = 0; m < 2; ++m) omega += tensor(sender[x][m], weighted[x][m]);
            omega = ((omega + omega.adjoint()) / 2).eval();
            Eigen::SelfAdjointEigenSolver<Mat4> es(omega);
            psi = es.eigenvectors().col(3);
            const double v = functional.normalization * es.eigenvalues()(3);
            run.trace.push_back(v);
            run.iterations = iter;
            if (v + 1e-9 < prev)
                throw std::logic_error("seesaw_ent_bit: objective decreased between iterations");
            if (iter > 1 && v - prev < config.tol) {
                run.converged = true;
                prev = v;
                break;
            }
            prev = v;
        }
        run.value = prev;
        run.strategy = {psi, sender, receiver};
    });

    std::size_t winner = 0;
    for (std::size_t r = 1; r < runs.size(); ++r)
        if (runs[r].value > runs[winner].value) winner = r;
    EntBitResult result;
    result.value = runs[winner].value;
    result.converged = runs[winner].converged;
    result.iterations = runs[winner].iterations;
    result.trace = runs[winner].trace;
    result.strategy = runs[winner].strategy;
    result.perRestartValues.reserve(runs.size());
    for (const auto& run : runs) result.perRestartValues.push_back(run.value);
    return result;
}

struct SweepResult {
    std::vector<double> thetas;
    std::vector<double> values;
    double threshold = 0.0;
    std::optional<double> crossing;
};

// Runs the partial-entanglement see-saw on a grid of Schmidt angles and
// locates where the optimized value crosses the threshold by linear
// interpolation between neighboring grid points.
inline SweepResult sweep_partial_entanglement(const GameFunctional& functional,
                                              const std::vector<double>& thetas, double threshold,
                                              const SeesawConfig& config) {
    if (thetas.empty()) throw std::invalid_argument("sweep_partial_entanglement: empty theta grid");
    SweepResult result;
    result.thetas = thetas;
    result.threshold = threshold;
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        SeesawConfig cfg = config;
        cfg.seed = detail::derive_seed(config.seed, 0x53c0ffee + i);
        cfg.restriction.kind = SeesawRestriction::Kind::PartialEntanglement;
        cfg.restriction.theta = thetas[i];
        result.values.push_back(seesaw_eaq(functional, cfg).value);
    }
    for (std::size_t i = 0; i + 1 < result.values.size(); ++i) {
        const double lo = result.values[i], hi = result.values[i + 1];
        if (lo <= threshold && threshold < hi && hi > lo) {
            result.crossing =
                thetas[i] + (threshold - lo) * (thetas[i + 1] - thetas[i]) / (hi - lo);
            break;
        }
    }
    return result;
}

}  // namespace eacomm
