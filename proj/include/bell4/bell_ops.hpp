// Two-setting Bell operators: the three-qubit Mermin operator B3 and the
// four-qubit operators D4^(i) = B3^(i) (x) (A_i+B_i)/2 + I (x) (A_i-B_i)/2.

#pragma once

#include "bell4/qubit_algebra.hpp"

#include <algorithm>
#include <array>
#include <string>

namespace bell4 {

/// Measurement directions a_j, b_j for the four observers (index 0 is qubit 1).
struct SettingSet {
    std::array<UnitVector3, 4> a;
    std::array<UnitVector3, 4> b;

    static SettingSet uniform(const UnitVector3& v) {
        return {{v, v, v, v}, {v, v, v, v}};
    }

    /// Settings seen by a permuted register: new qubit j uses old qubit perm[j-1]'s directions.
    SettingSet permuted(const QubitPermutation& perm) const {
        validate_permutation(perm);
        SettingSet out = *this;
        for (std::size_t j = 0; j < 4; ++j) {
            const auto src = static_cast<std::size_t>(perm[j] - 1);
            out.a[j] = a[src];
            out.b[j] = b[src];
        }
        return out;
    }

    /// s_i = (b_i + a_i)/2 and t_i = (b_i - a_i)/2.
    Vec3 s(int qubit) const { return half_combo(qubit, +1.0); }
    Vec3 t(int qubit) const { return half_combo(qubit, -1.0); }

    bool operator==(const SettingSet&) const = default;

private:
    Vec3 half_combo(int qubit, double sign) const {
        const auto& av = a.at(static_cast<std::size_t>(qubit - 1)).vec();
        const auto& bv = b.at(static_cast<std::size_t>(qubit - 1)).vec();
        return {0.5 * (bv[0] + sign * av[0]), 0.5 * (bv[1] + sign * av[1]), 0.5 * (bv[2] + sign * av[2])};
    }
};

/// Raw (not necessarily unit) direction vectors, used by the optimizer and by
/// multilinearity checks.
struct RawSettings {
    std::array<Vec3, 4> a{};
    std::array<Vec3, 4> b{};

    static RawSettings from(const SettingSet& s) {
        RawSettings r;
        for (std::size_t j = 0; j < 4; ++j) {
            r.a[j] = s.a[j].vec();
            r.b[j] = s.b[j].vec();
        }
        return r;
    }
    SettingSet to_unit() const {
        auto mk = [](const Vec3& v) { return UnitVector3::normalized(v); };
        return {{mk(a[0]), mk(a[1]), mk(a[2]), mk(a[3])}, {mk(b[0]), mk(b[1]), mk(b[2]), mk(b[3])}};
    }
};

struct BellOperator {
    int which = 1;
    ComplexMatrix matrix = ComplexMatrix::zero(16);
    SettingSet settings;
};

/// The three qubits other than `special`, ascending.
inline std::array<int, 3> complement_triple(int special) {
    if (special < 1 || special > 4) throw input_error("operator index must be in 1..4, got " + std::to_string(special));
    std::array<int, 3> t{};
    std::size_t k = 0;
    for (int q = 1; q <= 4; ++q)
        if (q != special) t[k++] = q;
    return t;
}

namespace detail {

inline void validate_triple(const std::array<int, 3>& t) {
    for (int q : t)
        if (q < 1 || q > 4) throw input_error("qubit index out of range in triple");
    if (!(t[0] < t[1] && t[1] < t[2])) throw input_error("triple must be three distinct ascending qubit indices");
}

/// Mermin combination 1/2(-AAA + ABB + BAB + BBA) as signed setting patterns.
/// Entry k is (sign, use_b for p, q, r).
struct MerminTerm {
    double sign;
    std::array<bool, 3> use_b;
};
inline constexpr std::array<MerminTerm, 4> kMerminTerms{{
    {-1.0, {false, false, false}},
    {+1.0, {false, true, true}},
    {+1.0, {true, false, true}},
    {+1.0, {true, true, false}},
}};

/// D4^(i) built from raw direction vectors (no normalization).
inline Eigen::MatrixXcd d4_matrix(const RawSettings& s, int i) {
    const auto triple = complement_triple(i);
    const auto si = static_cast<std::size_t>(i - 1);
    Vec3 c{}, d{};
    for (std::size_t k = 0; k < 3; ++k) {
        c[k] = 0.5 * (s.a[si][k] + s.b[si][k]);
        d[k] = 0.5 * (s.a[si][k] - s.b[si][k]);
    }
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(16, 16);
    for (const auto& term : kMerminTerms) {
        std::array<Eigen::Matrix2cd, 4> f;
        f[si] = sigma_dot(c);
        for (std::size_t k = 0; k < 3; ++k) {
            const auto q = static_cast<std::size_t>(triple[k] - 1);
            f[q] = sigma_dot(term.use_b[k] ? s.b[q] : s.a[q]);
        }
        out += (0.5 * term.sign) * tensor4(f);
    }
    std::array<Eigen::Matrix2cd, 4> g;
    g.fill(Eigen::Matrix2cd::Identity());
    g[si] = sigma_dot(d);
    out += tensor4(g);
    return out;
}

inline double bell_value_raw(const DensityMatrix& rho, const RawSettings& s, int i) {
    return expectation(rho, ComplexMatrix(d4_matrix(s, i)));
}

}  // namespace detail

/// Mermin operator 1/2(-A_p A_q A_r + A_p B_q B_r + B_p A_q B_r + B_p B_q A_r) on an
/// ascending triple (p, q, r), as an 8x8 matrix.
inline ComplexMatrix mermin_b3(const SettingSet& settings, const std::array<int, 3>& triple) {
    detail::validate_triple(triple);
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(8, 8);
    for (const auto& term : detail::kMerminTerms) {
        Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(1, 1);
        for (std::size_t k = 0; k < 3; ++k) {
            const auto q = static_cast<std::size_t>(triple[k] - 1);
            const Eigen::Matrix2cd o = detail::sigma_dot(term.use_b[k] ? settings.b[q].vec() : settings.a[q].vec());
            Eigen::MatrixXcd next(acc.rows() * 2, acc.cols() * 2);
            for (int r = 0; r < acc.rows(); ++r)
                for (int c = 0; c < acc.cols(); ++c) next.block(2 * r, 2 * c, 2, 2) = acc(r, c) * o;
            acc = std::move(next);
        }
        out += (0.5 * term.sign) * acc;
    }
    return ComplexMatrix(std::move(out));
}

/// D4^(i) with every factor placed on its own qubit slot.
inline BellOperator build_d4(const SettingSet& settings, int i) {
    complement_triple(i);
    return {i, ComplexMatrix(detail::d4_matrix(RawSettings::from(settings), i)), settings};
}

/// <D4^(i)>_rho via the dense 16x16 trace.
inline double bell_value(const DensityMatrix& rho, const SettingSet& settings, int i) {
    return expectation(rho, build_d4(settings, i).matrix);
}

/// Each |<D4^(i)>| is at most 2, so omega never exceeds this.
inline constexpr double kOmegaCap = 16.0;

/// Sum of the squared expectations of the four operators. GHZ4 reaches about
/// 9.858 at optimized settings, so 4 is not an upper bound.
inline double omega(const DensityMatrix& rho, const SettingSet& settings) {
    double w = 0.0;
    for (int i = 1; i <= 4; ++i) {
        const double v = bell_value(rho, settings, i);
        w += v * v;
    }
    return w;
}

}  // namespace bell4
