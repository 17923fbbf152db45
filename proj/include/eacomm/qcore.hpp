#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <string>
#include <utility>

#include "eacomm/common.hpp"

namespace eacomm {

using C = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Vec2 = Eigen::Vector2cd;
using Vec4 = Eigen::Vector4cd;

// The sender's qubit is the first tensor factor throughout; operators acting
// on the message qubit appear as U ⊗ 1.

inline const Mat2& pauli(char label) {
    static const Mat2 I = Mat2::Identity();
    static const Mat2 X = (Mat2() << 0, 1, 1, 0).finished();
    static const Mat2 Y = (Mat2() << 0, C(0, -1), C(0, 1), 0).finished();
    static const Mat2 Z = (Mat2() << 1, 0, 0, -1).finished();
    switch (label) {
        case 'I': return I;
        case 'X': return X;
        case 'Y': return Y;
        case 'Z': return Z;
        default: throw ValidationError(std::string("unknown Pauli label: ") + label);
    }
}

inline Mat4 tensor(const Mat2& a, const Mat2& b) {
    Mat4 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

inline Vec4 phi_plus() {
    Vec4 v;
    v << 1, 0, 0, 1;
    return v / std::sqrt(2.0);
}

// |E_b⟩ = (1 ⊗ σ_X^{b1} σ_Z^{b2}) |φ+⟩; the four results form the Bell basis.
inline Vec4 bell_ket(int b1, int b2) {
    if ((b1 & ~1) || (b2 & ~1)) throw ValidationError("bell_ket: bits must be 0 or 1");
    Mat2 op = Mat2::Identity();
    if (b1) op = pauli('X') * op;
    if (b2) op = op * pauli('Z');
    return tensor(Mat2::Identity(), op) * phi_plus();
}

// cos(θ/2)|00⟩ + sin(θ/2)|11⟩
inline Vec4 partially_entangled_ket(double theta) {
    Vec4 v = Vec4::Zero();
    v(0) = std::cos(theta / 2);
    v(3) = std::sin(theta / 2);
    return v;
}

struct DensityMatrix {
    Mat4 rho;

    static DensityMatrix from(const Mat4& m) {
        if (!m.isApprox(m.adjoint(), kTolAlgebra))
            throw ValidationError("density matrix must be Hermitian");
        if (std::abs(m.trace().real() - 1.0) > kTolAlgebra || std::abs(m.trace().imag()) > kTolAlgebra)
            throw ValidationError("density matrix must have unit trace");
        Eigen::SelfAdjointEigenSolver<Mat4> es(m, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -kTolAlgebra)
            throw ValidationError("density matrix must be positive semidefinite");
        return DensityMatrix{m};
    }

    static DensityMatrix pure(const Vec4& ket) {
        return DensityMatrix{ket * ket.adjoint()};
    }
};

// v |ψ⟩⟨ψ| + (1−v)/4 · 1
inline DensityMatrix isotropic_mix(const Vec4& ket, double v) {
    if (v < 0.0 || v > 1.0) throw ValidationError("visibility must lie in [0,1]");
    return DensityMatrix{v * (ket * ket.adjoint()) + (1.0 - v) / 4.0 * Mat4::Identity()};
}

inline double born_probability(const Mat4& effect, const DensityMatrix& state) {
    if (!effect.isApprox(effect.adjoint(), kTolAlgebra))
        throw ValidationError("effect must be Hermitian");
    Eigen::SelfAdjointEigenSolver<Mat4> es(effect, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kTolAlgebra || es.eigenvalues().maxCoeff() > 1.0 + kTolAlgebra)
        throw ValidationError("effect must satisfy 0 ≤ E ≤ 1");
    return (effect * state.rho).trace().real();
}

inline std::pair<double, Vec4> max_eigenpair(const Mat4& h) {
    if (!h.isApprox(h.adjoint(), kTolAlgebra))
        throw ValidationError("max_eigenpair expects a Hermitian matrix");
    Eigen::SelfAdjointEigenSolver<Mat4> es(h);
    const auto& vals = es.eigenvalues();
    // largest magnitude, not largest value
    int best = 0;
    for (int i = 1; i < 4; ++i)
        if (std::abs(vals(i)) > std::abs(vals(best))) best = i;
    return {vals(best), es.eigenvectors().col(best)};
}

// Reshapes a two-qubit ket into its 2×2 amplitude matrix (row = first qubit).
inline Mat2 amplitude_matrix(const Vec4& ket) {
    Mat2 m;
    m << ket(0), ket(1), ket(2), ket(3);
    return m;
}

inline std::pair<double, double> schmidt_coefficients(const Vec4& ket) {
    Eigen::JacobiSVD<Mat2> svd(amplitude_matrix(ket));
    return {svd.singularValues()(0), svd.singularValues()(1)};
}

// Recovers U with (U ⊗ 1)|φ+⟩ = |ket⟩ up to global phase: U = √2 × amplitude
// matrix, phase-fixed so the largest-magnitude entry is real positive.
inline Mat2 state_to_local_unitary(const Vec4& ket) {
    const auto [s0, s1] = schmidt_coefficients(ket);
    const double gap = std::max(std::abs(s0 - 1 / std::sqrt(2.0)), std::abs(s1 - 1 / std::sqrt(2.0)));
    if (gap > 1e-6)
        throw ValidationError("state is not maximally entangled (Schmidt gap " + std::to_string(gap) + ")");
    Mat2 U = std::sqrt(2.0) * amplitude_matrix(ket);
    int r = 0, c = 0;
    double mag = -1;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (std::abs(U(i, j)) > mag) { mag = std::abs(U(i, j)); r = i; c = j; }
    U *= std::polar(1.0, -std::arg(U(r, c)));
    return U;
}

// Unitary equality modulo global phase; 0 iff a = e^{iγ} b.
inline double distance_up_to_phase(const Mat2& a, const Mat2& b) {
    if (!(a.adjoint() * a).isApprox(Mat2::Identity(), 1e-6) ||
        !(b.adjoint() * b).isApprox(Mat2::Identity(), 1e-6))
        throw ValidationError("distance_up_to_phase expects unitary inputs");
    const double t = std::abs((a.adjoint() * b).trace());
    return std::sqrt(std::max(0.0, 2.0 - t));
}

}  // namespace eacomm
