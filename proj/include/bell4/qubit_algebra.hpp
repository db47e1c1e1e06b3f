// Dense complex linear algebra for systems of up to four qubits.
//
// Convention: qubit 1 is the leftmost (most significant) tensor factor, so the
// basis index of |i1 i2 i3 i4> is the 4-bit integer i1 i2 i3 i4.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bell4 {

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;

/// Raised for malformed caller input: wrong dimensions, non-unit vectors,
/// non-normalized states, invalid parameters.
class input_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a result violates a mathematical invariant that must hold for
/// any valid input (signals a bug, never expected in normal operation).
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kMaxQubits = 4;
inline constexpr int kMaxDim = 16;

inline double dot(const Vec3& u, const Vec3& v) { return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]; }
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

// ---------------------------------------------------------------------------
// ComplexMatrix
// ---------------------------------------------------------------------------

/// Square complex matrix of dimension 2, 4, 8 or 16.
class ComplexMatrix {
public:
    explicit ComplexMatrix(Eigen::MatrixXcd m) : m_(std::move(m)) {
        if (m_.rows() != m_.cols()) throw input_error("ComplexMatrix must be square");
        const auto d = m_.rows();
        if (d != 2 && d != 4 && d != 8 && d != 16)
            throw input_error("ComplexMatrix dimension must be 2, 4, 8 or 16, got " + std::to_string(d));
    }

    /// Row-major list of entries.
    ComplexMatrix(int dim, std::initializer_list<cplx> entries) : ComplexMatrix(from_list(dim, entries)) {}

    static ComplexMatrix identity(int dim) { return ComplexMatrix(Eigen::MatrixXcd::Identity(dim, dim)); }
    static ComplexMatrix zero(int dim) { return ComplexMatrix(Eigen::MatrixXcd::Zero(dim, dim)); }

    int dim() const { return static_cast<int>(m_.rows()); }
    cplx operator()(int r, int c) const { return m_(r, c); }
    const Eigen::MatrixXcd& eigen() const { return m_; }

    ComplexMatrix adjoint() const { return ComplexMatrix(m_.adjoint()); }
    cplx trace() const { return m_.trace(); }

    bool is_hermitian(double tol = 1e-12) const {
        return ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= tol);
    }
    bool is_unitary(double tol = 1e-10) const {
        const auto id = Eigen::MatrixXcd::Identity(dim(), dim());
        return ((m_ * m_.adjoint() - id).cwiseAbs().maxCoeff() <= tol);
    }

    /// Largest entrywise modulus of the difference.
    double max_abs_diff(const ComplexMatrix& other) const {
        if (other.dim() != dim()) throw input_error("dimension mismatch");
        return (m_ - other.m_).cwiseAbs().maxCoeff();
    }

    /// Eigenvalues in ascending order; requires a Hermitian matrix.
    Eigen::VectorXd hermitian_eigenvalues() const {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_, Eigen::EigenvaluesOnly);
        return es.eigenvalues();
    }

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
        if (a.dim() != b.dim()) throw input_error("dimension mismatch in product");
        return ComplexMatrix(a.m_ * b.m_);
    }
    friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
        if (a.dim() != b.dim()) throw input_error("dimension mismatch in sum");
        return ComplexMatrix(a.m_ + b.m_);
    }
    friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
        if (a.dim() != b.dim()) throw input_error("dimension mismatch in difference");
        return ComplexMatrix(a.m_ - b.m_);
    }
    friend ComplexMatrix operator*(cplx s, const ComplexMatrix& a) { return ComplexMatrix(s * a.m_); }
    friend ComplexMatrix operator*(double s, const ComplexMatrix& a) { return ComplexMatrix(s * a.m_); }

private:
    static Eigen::MatrixXcd from_list(int dim, std::initializer_list<cplx> entries) {
        if (static_cast<int>(entries.size()) != dim * dim) throw input_error("entry count does not match dim*dim");
        Eigen::MatrixXcd m(dim, dim);
        auto it = entries.begin();
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c) m(r, c) = *it++;
        return m;
    }

    Eigen::MatrixXcd m_;
};

// ---------------------------------------------------------------------------
// UnitVector3
// ---------------------------------------------------------------------------

/// Real unit 3-vector; a measurement direction.
class UnitVector3 {
public:
    /// Accepts input whose norm deviates from 1 by at most 1e-9 and stores the
    /// exactly renormalized vector.
    UnitVector3(double x, double y, double z) {
        const double n = std::sqrt(x * x + y * y + z * z);
        if (!std::isfinite(n) || std::abs(n - 1.0) > 1e-9)
            throw input_error("direction vector is not unit length (norm " + std::to_string(n) + ")");
        v_ = {x / n, y / n, z / n};
    }
    explicit UnitVector3(const Vec3& v) : UnitVector3(v[0], v[1], v[2]) {}

    /// Normalizes any nonzero finite vector.
    static UnitVector3 normalized(const Vec3& v) {
        const double n = bell4::norm(v);
        if (!(n > 0.0) || !std::isfinite(n)) throw input_error("cannot normalize a zero or non-finite vector");
        return UnitVector3(v[0] / n, v[1] / n, v[2] / n);
    }

    /// Spherical angles (polar theta from +z, azimuth phi).
    static UnitVector3 from_angles(double theta, double phi) {
        return UnitVector3(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
    }

    static UnitVector3 x_axis() { return {1, 0, 0}; }
    static UnitVector3 y_axis() { return {0, 1, 0}; }
    static UnitVector3 z_axis() { return {0, 0, 1}; }

    double x() const { return v_[0]; }
    double y() const { return v_[1]; }
    double z() const { return v_[2]; }
    double operator[](std::size_t k) const { return v_[k]; }
    const Vec3& vec() const { return v_; }

    UnitVector3 operator-() const { return UnitVector3(-v_[0], -v_[1], -v_[2]); }
    bool operator==(const UnitVector3&) const = default;

private:
    Vec3 v_{};
};

// ---------------------------------------------------------------------------
// Pauli matrices and observables
// ---------------------------------------------------------------------------

/// Pauli matrix by index: 0 -> I, 1 -> sigma_x, 2 -> sigma_y (+i at (2,1)), 3 -> sigma_z.
inline const Eigen::Matrix2cd& pauli2(int k) {
    static const std::array<Eigen::Matrix2cd, 4> table = [] {
        const cplx i{0.0, 1.0};
        std::array<Eigen::Matrix2cd, 4> t;
        t[0] << 1, 0, 0, 1;
        t[1] << 0, 1, 1, 0;
        t[2] << 0, -i, i, 0;
        t[3] << 1, 0, 0, -1;
        return t;
    }();
    if (k < 0 || k > 3) throw input_error("Pauli index must be 0..3");
    return table[static_cast<std::size_t>(k)];
}

inline ComplexMatrix pauli(int k) { return ComplexMatrix(Eigen::MatrixXcd(pauli2(k))); }

namespace detail {

/// v.sigma for an arbitrary real vector (no unit-norm check).
inline Eigen::Matrix2cd sigma_dot(const Vec3& v) {
    return v[0] * pauli2(1) + v[1] * pauli2(2) + v[2] * pauli2(3);
}

/// Kronecker product of four 2x2 factors, qubit 1 leftmost.
inline Eigen::MatrixXcd tensor4(const std::array<Eigen::Matrix2cd, 4>& f) {
    Eigen::MatrixXcd out(16, 16);
    for (int r = 0; r < 16; ++r) {
        for (int c = 0; c < 16; ++c) {
            cplx v = 1.0;
            for (int q = 0; q < 4; ++q) {
                const int sh = 3 - q;
                v *= f[static_cast<std::size_t>(q)]((r >> sh) & 1, (c >> sh) & 1);
                if (v == cplx{}) break;
            }
            out(r, c) = v;
        }
    }
    return out;
}

}  // namespace detail

/// Dichotomic observable v.sigma; eigenvalues +1 and -1.
inline ComplexMatrix observable_from_direction(const UnitVector3& v) {
    return ComplexMatrix(Eigen::MatrixXcd(detail::sigma_dot(v.vec())));
}

/// Kronecker product A (x) B.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const int da = a.dim(), db = b.dim();
    if (da * db > kMaxDim) throw input_error("kron result would exceed dimension 16");
    Eigen::MatrixXcd out(da * db, da * db);
    for (int r = 0; r < da; ++r)
        for (int c = 0; c < da; ++c) out.block(r * db, c * db, db, db) = a(r, c) * b.eigen();
    return ComplexMatrix(std::move(out));
}

/// I (x) ... (x) M (x) ... (x) I with M on qubit `slot` (1..4) of a four-qubit register.
inline ComplexMatrix embed_on_qubit(const ComplexMatrix& m, int slot) {
    if (m.dim() != 2) throw input_error("embed_on_qubit expects a 2x2 matrix");
    if (slot < 1 || slot > 4) throw input_error("qubit slot must be in 1..4, got " + std::to_string(slot));
    std::array<Eigen::Matrix2cd, 4> f;
    f.fill(Eigen::Matrix2cd::Identity());
    f[static_cast<std::size_t>(slot - 1)] = m.eigen();
    return ComplexMatrix(detail::tensor4(f));
}

// ---------------------------------------------------------------------------
// States
// ---------------------------------------------------------------------------

/// Normalized pure state on 1..4 qubits (2^n amplitudes, qubit 1 most significant).
class PureState {
public:
    explicit PureState(std::vector<cplx> amplitudes) : amps_(std::move(amplitudes)) {
        const auto n = amps_.size();
        if (n != 2 && n != 4 && n != 8 && n != 16)
            throw input_error("a pure state needs 2, 4, 8 or 16 amplitudes, got " + std::to_string(n));
        double s = 0.0;
        for (const auto& a : amps_) {
            if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) throw input_error("amplitude is NaN or infinite");
            s += std::norm(a);
        }
        if (std::abs(s - 1.0) > 1e-12)
            throw input_error("state is not normalized (sum |a|^2 = " + std::to_string(s) + ")");
    }

    /// Scales a nonzero amplitude vector to unit norm.
    static PureState normalize(std::vector<cplx> amplitudes) {
        double s = 0.0;
        for (const auto& a : amplitudes) s += std::norm(a);
        if (!(s > 0.0) || !std::isfinite(s)) throw input_error("cannot normalize a zero or non-finite amplitude vector");
        const double inv = 1.0 / std::sqrt(s);
        for (auto& a : amplitudes) a *= inv;
        return PureState(std::move(amplitudes));
    }

    /// Computational basis state |bits>, e.g. basis("0100").
    static PureState basis(const std::string& bits) {
        if (bits.empty() || bits.size() > 4) throw input_error("basis label must have 1..4 bits");
        std::size_t idx = 0;
        for (char ch : bits) {
            if (ch != '0' && ch != '1') throw input_error("basis label must contain only 0 and 1");
            idx = (idx << 1) | static_cast<std::size_t>(ch - '0');
        }
        std::vector<cplx> a(std::size_t{1} << bits.size());
        a[idx] = 1.0;
        return PureState(std::move(a));
    }

    int num_qubits() const {
        int n = 0;
        while ((std::size_t{1} << n) < amps_.size()) ++n;
        return n;
    }
    std::size_t dim() const { return amps_.size(); }
    cplx operator[](std::size_t i) const { return amps_[i]; }
    std::span<const cplx> amplitudes() const { return amps_; }

    cplx inner(const PureState& other) const {
        if (other.dim() != dim()) throw input_error("dimension mismatch in inner product");
        cplx s{};
        for (std::size_t i = 0; i < amps_.size(); ++i) s += std::conj(amps_[i]) * other.amps_[i];
        return s;
    }

    /// Tensor product, `this` on the leading qubits.
    PureState tensor(const PureState& other) const {
        if (num_qubits() + other.num_qubits() > kMaxQubits) throw input_error("tensor product exceeds four qubits");
        std::vector<cplx> out(dim() * other.dim());
        for (std::size_t i = 0; i < dim(); ++i)
            for (std::size_t j = 0; j < other.dim(); ++j) out[i * other.dim() + j] = amps_[i] * other.amps_[j];
        return PureState::normalize(std::move(out));
    }

private:
    std::vector<cplx> amps_;
};

/// Four-qubit density matrix: Hermitian, unit trace, positive semidefinite.
class DensityMatrix {
public:
    explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
        if (m_.dim() != 16) throw input_error("density matrix must be 16x16");
        if (!m_.eigen().allFinite()) throw input_error("density matrix has NaN or infinite entries");
        if (!m_.is_hermitian(1e-10)) throw input_error("density matrix is not Hermitian");
        const cplx tr = m_.trace();
        if (std::abs(tr - 1.0) > 1e-10) throw input_error("density matrix trace is not 1");
        if (m_.hermitian_eigenvalues().minCoeff() < -1e-9) throw input_error("density matrix is not positive semidefinite");
    }

    static DensityMatrix maximally_mixed() { return DensityMatrix((1.0 / 16.0) * ComplexMatrix::identity(16)); }

    const ComplexMatrix& matrix() const { return m_; }
    cplx operator()(int r, int c) const { return m_(r, c); }

    double purity() const { return (m_.eigen() * m_.eigen()).trace().real(); }

private:
    ComplexMatrix m_;
};

/// tr(rho M) for Hermitian 16x16 M. An imaginary residue up to 1e-10 is dropped.
inline double expectation(const DensityMatrix& rho, const ComplexMatrix& m) {
    if (m.dim() != 16) throw input_error("observable must be 16x16 to match a four-qubit state");
    if (!m.is_hermitian(1e-10)) throw input_error("observable is not Hermitian");
    const auto& r = rho.matrix().eigen();
    const auto& o = m.eigen();
    cplx tr{};
    for (int i = 0; i < 16; ++i)
        for (int k = 0; k < 16; ++k) tr += r(i, k) * o(k, i);
    if (std::abs(tr.imag()) > 1e-10) throw numerical_error("expectation has a non-negligible imaginary part");
    return tr.real();
}

/// |psi><psi| for a four-qubit pure state.
inline DensityMatrix pure_to_density(const PureState& psi) {
    if (psi.num_qubits() != 4) throw input_error("pure_to_density expects a four-qubit state");
    Eigen::MatrixXcd m(16, 16);
    for (int r = 0; r < 16; ++r)
        for (int c = 0; c < 16; ++c) m(r, c) = psi[static_cast<std::size_t>(r)] * std::conj(psi[static_cast<std::size_t>(c)]);
    return DensityMatrix(ComplexMatrix(std::move(m)));
}

/// Convex combination sum_k p_k |psi_k><psi_k|.
inline DensityMatrix mix(std::span<const std::pair<double, PureState>> terms) {
    if (terms.empty()) throw input_error("mixture needs at least one term");
    double total = 0.0;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(16, 16);
    for (const auto& [p, psi] : terms) {
        if (!(p > 0.0)) throw input_error("mixture weights must be positive");
        total += p;
        m += p * pure_to_density(psi).matrix().eigen();
    }
    if (std::abs(total - 1.0) > 1e-9) throw input_error("mixture weights must sum to 1");
    return DensityMatrix(ComplexMatrix(std::move(m)));
}

inline DensityMatrix mix(std::initializer_list<std::pair<double, PureState>> terms) {
    return mix(std::span<const std::pair<double, PureState>>(terms.begin(), terms.size()));
}

/// Qubit permutation, 1-based: new qubit j carries old qubit perm[j-1].
using QubitPermutation = std::array<int, 4>;

inline void validate_permutation(const QubitPermutation& perm) {
    std::array<bool, 4> seen{};
    for (int p : perm) {
        if (p < 1 || p > 4 || seen[static_cast<std::size_t>(p - 1)]) throw input_error("invalid qubit permutation");
        seen[static_cast<std::size_t>(p - 1)] = true;
    }
}

inline QubitPermutation inverse(const QubitPermutation& perm) {
    validate_permutation(perm);
    QubitPermutation inv{};
    for (int j = 0; j < 4; ++j) inv[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)] - 1)] = j + 1;
    return inv;
}

/// Reorders tensor factors: the amplitude of |i_perm(1) ... i_perm(4)> in the
/// result equals the amplitude of |i1 ... i4> in the input.
inline PureState permute_qubits(const PureState& psi, const QubitPermutation& perm) {
    validate_permutation(perm);
    if (psi.num_qubits() != 4) throw input_error("permute_qubits expects a four-qubit state");
    std::vector<cplx> out(16);
    for (int idx = 0; idx < 16; ++idx) {
        int dst = 0;
        for (int j = 0; j < 4; ++j) {
            const int src_qubit = perm[static_cast<std::size_t>(j)];
            const int bit = (idx >> (4 - src_qubit)) & 1;
            dst |= bit << (3 - j);
        }
        out[static_cast<std::size_t>(dst)] = psi[static_cast<std::size_t>(idx)];
    }
    return PureState(std::move(out));
}

/// Same reordering applied to a density matrix.
inline DensityMatrix permute_qubits(const DensityMatrix& rho, const QubitPermutation& perm) {
    validate_permutation(perm);
    std::array<int, 16> map{};
    for (int idx = 0; idx < 16; ++idx) {
        int dst = 0;
        for (int j = 0; j < 4; ++j) dst |= ((idx >> (4 - perm[static_cast<std::size_t>(j)])) & 1) << (3 - j);
        map[static_cast<std::size_t>(idx)] = dst;
    }
    Eigen::MatrixXcd m(16, 16);
    for (int r = 0; r < 16; ++r)
        for (int c = 0; c < 16; ++c) m(map[static_cast<std::size_t>(r)], map[static_cast<std::size_t>(c)]) = rho(r, c);
    return DensityMatrix(ComplexMatrix(std::move(m)));
}

}  // namespace bell4
