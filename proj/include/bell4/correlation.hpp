// Pauli correlation tensor of a four-qubit state:
//   rho = 1/16 sum_{mu} Q_mu sigma_mu1 (x) sigma_mu2 (x) sigma_mu3 (x) sigma_mu4,
// with mu_j in {0,1,2,3} (0 = identity) and Q_0000 = 1.

#pragma once

#include "bell4/qubit_algebra.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace bell4 {

/// All 256 Pauli coefficients, indexed base 4 with qubit 1 the slowest digit.
class CorrelationTensor {
public:
    explicit CorrelationTensor(const std::array<double, 256>& coeffs) : q_(coeffs) {}

    static constexpr std::size_t index(int m1, int m2, int m3, int m4) {
        return static_cast<std::size_t>(((m1 * 4 + m2) * 4 + m3) * 4 + m4);
    }

    /// Coefficient for a Pauli string given per-qubit indices 0..3.
    double at(int m1, int m2, int m3, int m4) const { return q_[index(m1, m2, m3, m4)]; }
    double operator[](std::size_t flat) const { return q_[flat]; }
    const std::array<double, 256>& coefficients() const { return q_; }

    /// Single-qubit Bloch vector of qubit `qubit` (1..4).
    Vec3 single(int qubit) const {
        Vec3 v{};
        for (int k = 1; k <= 3; ++k) v[static_cast<std::size_t>(k - 1)] = q_[with({{qubit, k}})];
        return v;
    }

    /// Two-body correlation matrix T_kl for qubits q1 < q2.
    std::array<std::array<double, 3>, 3> pair(int q1, int q2) const {
        std::array<std::array<double, 3>, 3> t{};
        for (int k = 1; k <= 3; ++k)
            for (int l = 1; l <= 3; ++l)
                t[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(l - 1)] = q_[with({{q1, k}, {q2, l}})];
        return t;
    }

    /// 27 three-body components for qubits q1 < q2 < q3, lexicographic (first index slowest).
    std::vector<double> triple(int q1, int q2, int q3) const {
        std::vector<double> v;
        v.reserve(27);
        for (int k = 1; k <= 3; ++k)
            for (int l = 1; l <= 3; ++l)
                for (int m = 1; m <= 3; ++m) v.push_back(q_[with({{q1, k}, {q2, l}, {q3, m}})]);
        return v;
    }

    /// 81 four-body components, lexicographic.
    std::vector<double> quad() const {
        std::vector<double> v;
        v.reserve(81);
        for (int a = 1; a <= 3; ++a)
            for (int b = 1; b <= 3; ++b)
                for (int c = 1; c <= 3; ++c)
                    for (int d = 1; d <= 3; ++d) v.push_back(at(a, b, c, d));
        return v;
    }

    Vec3 alpha() const { return single(1); }
    Vec3 beta() const { return single(2); }
    Vec3 gamma() const { return single(3); }
    Vec3 epsilon() const { return single(4); }
    std::vector<double> S() const { return triple(1, 2, 4); }
    std::vector<double> T() const { return triple(1, 2, 3); }
    std::vector<double> U() const { return triple(2, 3, 4); }
    std::vector<double> V() const { return triple(1, 3, 4); }
    std::vector<double> Q() const { return quad(); }

    /// Squared norms |alpha|^2, |beta|^2, |gamma|^2, |epsilon|^2, |S|^2, |T|^2, |U|^2, |V|^2, |Q|^2.
    std::array<double, 9> named_square_norms() const {
        auto sq3 = [](const Vec3& v) { return dot(v, v); };
        auto sqv = [](const std::vector<double>& v) {
            double s = 0.0;
            for (double x : v) s += x * x;
            return s;
        };
        return {sq3(alpha()), sq3(beta()), sq3(gamma()), sq3(epsilon()), sqv(S()), sqv(T()), sqv(U()), sqv(V()), sqv(Q())};
    }

    /// Number of non-identity factors in the Pauli string at a flat index.
    static int weight(std::size_t flat) {
        int w = 0;
        for (int k = 0; k < 4; ++k) {
            if (flat % 4 != 0) ++w;
            flat /= 4;
        }
        return w;
    }

private:
    static std::size_t with(std::initializer_list<std::pair<int, int>> entries) {
        std::array<int, 4> m{};
        for (const auto& [qubit, k] : entries) {
            if (qubit < 1 || qubit > 4) throw input_error("qubit index out of range");
            m[static_cast<std::size_t>(qubit - 1)] = k;
        }
        return index(m[0], m[1], m[2], m[3]);
    }

    std::array<double, 256> q_{};
};

namespace detail {

/// Pauli string sigma_mu as a signed permutation: row r has its single nonzero at
/// column r ^ flip with value phase(r).
struct PauliString {
    int flip = 0;
    std::array<cplx, 16> phase{};
};

inline PauliString pauli_string(std::size_t flat) {
    std::array<int, 4> mu{};
    for (int q = 3; q >= 0; --q) {
        mu[static_cast<std::size_t>(q)] = static_cast<int>(flat % 4);
        flat /= 4;
    }
    PauliString p;
    for (int q = 0; q < 4; ++q) {
        const int m = mu[static_cast<std::size_t>(q)];
        if (m == 1 || m == 2) p.flip |= 1 << (3 - q);
    }
    for (int r = 0; r < 16; ++r) {
        cplx ph = 1.0;
        for (int q = 0; q < 4; ++q) {
            const int bit = (r >> (3 - q)) & 1;
            const auto& s = pauli2(mu[static_cast<std::size_t>(q)]);
            ph *= s(bit, bit ^ ((p.flip >> (3 - q)) & 1));
        }
        p.phase[static_cast<std::size_t>(r)] = ph;
    }
    return p;
}

inline const std::array<PauliString, 256>& pauli_strings() {
    static const std::array<PauliString, 256> table = [] {
        std::array<PauliString, 256> t;
        for (std::size_t k = 0; k < 256; ++k) t[k] = pauli_string(k);
        return t;
    }();
    return table;
}

}  // namespace detail

/// Extracts Q_mu = tr(rho sigma_mu) for all 256 Pauli strings.
inline CorrelationTensor correlation_tensor(const DensityMatrix& rho) {
    const auto& m = rho.matrix().eigen();
    const auto& strings = detail::pauli_strings();
    std::array<double, 256> q{};
    for (std::size_t k = 0; k < 256; ++k) {
        const auto& p = strings[k];
        cplx tr{};
        // tr(rho P) = sum_r P(r, r^flip) rho(r^flip, r)
        for (int r = 0; r < 16; ++r) tr += p.phase[static_cast<std::size_t>(r)] * m(r ^ p.flip, r);
        q[k] = tr.real();
    }
    return CorrelationTensor(q);
}

/// Rebuilds rho = 1/16 sum_mu Q_mu sigma_mu.
inline DensityMatrix reconstruct(const CorrelationTensor& t) {
    const auto& strings = detail::pauli_strings();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(16, 16);
    for (std::size_t k = 0; k < 256; ++k) {
        const double c = t[k] / 16.0;
        if (c == 0.0) continue;
        const auto& p = strings[k];
        for (int r = 0; r < 16; ++r) m(r, r ^ p.flip) += c * p.phase[static_cast<std::size_t>(r)];
    }
    return DensityMatrix(ComplexMatrix(std::move(m)));
}

/// |alpha|^2+|beta|^2+|gamma|^2+|epsilon|^2+|S|^2+|T|^2+|U|^2+|V|^2+|Q|^2 (two-body terms excluded).
inline double lemma_sum(const CorrelationTensor& t) {
    double s = 0.0;
    for (double x : t.named_square_norms()) s += x;
    return s;
}

/// Sum of squares of all 255 non-identity coefficients; equals 16 tr(rho^2) - 1.
inline double total_correlation_norm(const CorrelationTensor& t) {
    double s = 0.0;
    for (std::size_t k = 1; k < 256; ++k) s += t[k] * t[k];
    return s;
}

/// (u1 (x) u2 (x) u3 (x) u4) rho (u1 (x) u2 (x) u3 (x) u4)^dagger.
inline DensityMatrix apply_local_unitaries(const DensityMatrix& rho, const std::array<ComplexMatrix, 4>& u) {
    std::array<Eigen::Matrix2cd, 4> f;
    for (std::size_t q = 0; q < 4; ++q) {
        if (u[q].dim() != 2) throw input_error("local unitaries must be 2x2");
        if (!u[q].is_unitary(1e-10)) throw input_error("local factor " + std::to_string(q + 1) + " is not unitary");
        f[q] = u[q].eigen();
    }
    const Eigen::MatrixXcd big = detail::tensor4(f);
    Eigen::MatrixXcd out = big * rho.matrix().eigen() * big.adjoint();
    // Symmetrize away rounding so the Hermitian check is exact.
    out = 0.5 * (out + out.adjoint()).eval();
    return DensityMatrix(ComplexMatrix(std::move(out)));
}

}  // namespace bell4
