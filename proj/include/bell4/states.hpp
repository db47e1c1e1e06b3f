// State families: generalized GHZ, Schmidt pairs, GHZ- and W-type three-qubit
// states, product compositions, and seeded random states.

#pragma once

#include "bell4/correlation.hpp"
#include "bell4/qubit_algebra.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bell4 {

// ---------------------------------------------------------------------------
// RNG
// ---------------------------------------------------------------------------

inline constexpr std::string_view kRngAlgorithm = "mt19937_64+splitmix64";

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seedable generator. Independent streams are derived from (seed, stream index),
/// so each task owns its generator.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(splitmix64(seed)) {}

    static Rng stream(std::uint64_t seed, std::uint64_t index) { return Rng(splitmix64(seed) ^ splitmix64(~index)); }
    Rng split(std::uint64_t index) { return stream(eng_(), index); }

    double normal() { return normal_(eng_); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * std::generate_canonical<double, 53>(eng_); }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform(0.0, 1.0) * static_cast<double>(n)) % n; }

    /// Uniform point on the unit sphere.
    UnitVector3 direction() {
        for (;;) {
            const Vec3 v{normal(), normal(), normal()};
            if (norm(v) > 1e-8) return UnitVector3::normalized(v);
        }
    }

    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

// ---------------------------------------------------------------------------
// Families
// ---------------------------------------------------------------------------

/// cos(alpha)|0000> + sin(alpha)|1111>, 0 <= alpha <= pi/4.
inline PureState generalized_ghz(double alpha) {
    if (!(alpha >= 0.0 && alpha <= std::numbers::pi / 4 + 1e-12))
        throw input_error("generalized GHZ angle must lie in [0, pi/4]");
    std::vector<cplx> a(16);
    a[0] = std::cos(alpha);
    a[15] = std::sin(alpha);
    return PureState::normalize(std::move(a));
}

/// cos(alpha)|01> - sin(alpha)|10> on two qubits.
inline PureState schmidt_pair(double alpha) {
    if (!std::isfinite(alpha)) throw input_error("Schmidt angle must be finite");
    return PureState::normalize({0.0, std::cos(alpha), -std::sin(alpha), 0.0});
}

/// Normalization K = (1 + 2 c_d s_d c_a c_b c_g c_phi)^-1 of the GHZ-type family.
inline double ghz_type3_norm(double delta, double alpha, double beta, double gamma, double phi) {
    const double den = 1.0 + 2.0 * std::cos(delta) * std::sin(delta) * std::cos(alpha) * std::cos(beta) *
                                 std::cos(gamma) * std::cos(phi);
    if (!(den > 0.0)) throw input_error("GHZ-type normalization is undefined for these parameters");
    return 1.0 / den;
}

/// sqrt(K) (c_d|000> + s_d e^{i phi} |phi_A phi_B phi_C>), |phi_X> = c_x|0> + s_x|1>.
inline PureState ghz_type3(double delta, double alpha, double beta, double gamma, double phi) {
    constexpr double pi = std::numbers::pi;
    if (!(delta > 0.0 && delta <= pi / 4 + 1e-12)) throw input_error("GHZ-type delta must lie in (0, pi/4]");
    for (double x : {alpha, beta, gamma})
        if (!(x > 0.0 && x <= pi / 2 + 1e-12)) throw input_error("GHZ-type alpha, beta, gamma must lie in (0, pi/2]");
    if (!(phi >= 0.0 && phi < 2 * pi)) throw input_error("GHZ-type phi must lie in [0, 2pi)");
    const double k = ghz_type3_norm(delta, alpha, beta, gamma, phi);
    const std::array<double, 2> fa{std::cos(alpha), std::sin(alpha)};
    const std::array<double, 2> fb{std::cos(beta), std::sin(beta)};
    const std::array<double, 2> fc{std::cos(gamma), std::sin(gamma)};
    const cplx branch = std::sin(delta) * std::polar(1.0, phi);
    std::vector<cplx> a(8);
    for (std::size_t i = 0; i < 8; ++i) a[i] = branch * fa[(i >> 2) & 1] * fb[(i >> 1) & 1] * fc[i & 1];
    a[0] += std::cos(delta);
    for (auto& x : a) x *= std::sqrt(k);
    return PureState(std::move(a));
}

/// sqrt(a)|001> + sqrt(b)|010> + sqrt(c)|100> + sqrt(d)|000>, d = 1-a-b-c.
inline PureState w_type3(double a, double b, double c) {
    if (!(a > 0.0 && b > 0.0 && c > 0.0)) throw input_error("W-type weights must be positive");
    double d = 1.0 - (a + b + c);
    if (d < -1e-12) throw input_error("W-type weights must satisfy a + b + c <= 1");
    d = std::max(d, 0.0);
    std::vector<cplx> amp(8);
    amp[0] = std::sqrt(d);
    amp[1] = std::sqrt(a);
    amp[2] = std::sqrt(b);
    amp[4] = std::sqrt(c);
    return PureState::normalize(std::move(amp));
}

/// A factor of a product state together with the (1-based) qubits it occupies.
struct StatePart {
    PureState state;
    std::vector<int> qubits;
};

/// Tensor product of parts reordered into global qubit order.
inline PureState product(const std::vector<StatePart>& parts) {
    std::array<bool, 4> used{};
    std::vector<int> order;
    std::vector<cplx> acc{1.0};
    for (const auto& part : parts) {
        if (static_cast<int>(part.qubits.size()) != part.state.num_qubits())
            throw input_error("part occupies " + std::to_string(part.qubits.size()) + " qubits but has " +
                              std::to_string(part.state.num_qubits()));
        for (int q : part.qubits) {
            if (q < 1 || q > 4) throw input_error("qubit slot out of range");
            if (used[static_cast<std::size_t>(q - 1)]) throw input_error("qubit slots overlap");
            used[static_cast<std::size_t>(q - 1)] = true;
            order.push_back(q);
        }
        std::vector<cplx> next(acc.size() * part.state.dim());
        for (std::size_t i = 0; i < acc.size(); ++i)
            for (std::size_t j = 0; j < part.state.dim(); ++j) next[i * part.state.dim() + j] = acc[i] * part.state[j];
        acc = std::move(next);
    }
    if (order.size() != 4) throw input_error("parts must cover all four qubits");
    // Tensor position j currently holds qubit order[j]; new qubit k must carry position of k.
    QubitPermutation perm{};
    for (std::size_t pos = 0; pos < 4; ++pos) perm[static_cast<std::size_t>(order[pos] - 1)] = static_cast<int>(pos) + 1;
    return permute_qubits(PureState::normalize(std::move(acc)), perm);
}

// ---------------------------------------------------------------------------
// Random states
// ---------------------------------------------------------------------------

/// Gaussian amplitudes, normalized: Haar distributed on n qubits.
inline PureState haar_random_pure(Rng& rng, int num_qubits = 4) {
    if (num_qubits < 1 || num_qubits > 4) throw input_error("qubit count must be 1..4");
    std::vector<cplx> a(std::size_t{1} << num_qubits);
    for (auto& x : a) x = {rng.normal(), rng.normal()};
    return PureState::normalize(std::move(a));
}

inline PureState haar_random_pure(std::uint64_t seed) {
    Rng rng(seed);
    return haar_random_pure(rng, 4);
}

/// Haar-random 2x2 unitary (QR of a Ginibre matrix with phase correction).
inline ComplexMatrix random_unitary2(Rng& rng) {
    Eigen::Matrix2cd g;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) g(r, c) = {rng.normal(), rng.normal()};
    Eigen::HouseholderQR<Eigen::Matrix2cd> qr(g);
    Eigen::Matrix2cd q = qr.householderQ();
    const Eigen::Matrix2cd rm = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int k = 0; k < 2; ++k) {
        const cplx d = rm(k, k);
        if (std::abs(d) > 0) q.col(k) *= d / std::abs(d);
    }
    return ComplexMatrix(Eigen::MatrixXcd(q));
}

/// Applies a 2x2 unitary to one qubit of a pure state.
inline PureState apply_single_qubit(const PureState& psi, const ComplexMatrix& u, int qubit) {
    const int n = psi.num_qubits();
    if (qubit < 1 || qubit > n) throw input_error("qubit out of range");
    const int sh = n - qubit;
    std::vector<cplx> out(psi.dim());
    for (std::size_t idx = 0; idx < psi.dim(); ++idx) {
        const int bit = static_cast<int>((idx >> sh) & 1);
        const std::size_t base = idx & ~(std::size_t{1} << sh);
        out[idx] = u(bit, 0) * psi[base] + u(bit, 1) * psi[base | (std::size_t{1} << sh)];
    }
    return PureState::normalize(std::move(out));
}

/// Random local-unitary image of a state (same entanglement class).
inline PureState random_local_rotation(const PureState& psi, Rng& rng) {
    PureState out = psi;
    for (int q = 1; q <= psi.num_qubits(); ++q) out = apply_single_qubit(out, random_unitary2(rng), q);
    return out;
}

/// Dirichlet(1,...,1) weights.
inline std::vector<double> dirichlet_uniform(Rng& rng, std::size_t k) {
    std::vector<double> w(k);
    double s = 0.0;
    for (auto& x : w) {
        x = -std::log(std::max(rng.uniform(0.0, 1.0), 1e-300));
        s += x;
    }
    for (auto& x : w) x /= s;
    return w;
}

/// Uniformly weighted random GHZ-type factor within the family's parameter box.
inline PureState random_ghz_type3(Rng& rng) {
    constexpr double pi = std::numbers::pi;
    const double delta = rng.uniform(1e-3, pi / 4);
    const double a = rng.uniform(1e-3, pi / 2), b = rng.uniform(1e-3, pi / 2), c = rng.uniform(1e-3, pi / 2);
    const double phi = rng.uniform(0.0, 2 * pi * (1 - 1e-12));
    return ghz_type3(delta, a, b, c, phi);
}

inline PureState random_w_type3(Rng& rng) {
    const auto w = dirichlet_uniform(rng, 4);
    return w_type3(std::max(w[0], 1e-9), std::max(w[1], 1e-9), std::max(w[2], 1e-9));
}

// ---------------------------------------------------------------------------
// Separability-class sampling
// ---------------------------------------------------------------------------

/// Product structure of a four-qubit pure state: groups of qubits, each group
/// in an (in general entangled) joint state, groups in product.
using Partition = std::vector<std::vector<int>>;

/// Random pure member of a partition. Groups of three use GHZ-type or W-type
/// factors (equal odds) with random local rotations; other groups are Haar.
inline PureState random_partition_member(const Partition& partition, Rng& rng) {
    std::vector<StatePart> parts;
    for (const auto& group : partition) {
        const int n = static_cast<int>(group.size());
        if (n == 3) {
            PureState core = (rng.uniform(0.0, 1.0) < 0.5) ? random_ghz_type3(rng) : random_w_type3(rng);
            parts.push_back({random_local_rotation(core, rng), group});
        } else {
            parts.push_back({haar_random_pure(rng, n), group});
        }
    }
    return product(parts);
}

/// Mixture of k random members of the same partition with Dirichlet weights.
inline DensityMatrix random_partition_mixture(const Partition& partition, Rng& rng, std::size_t k) {
    if (k == 0) throw input_error("mixture needs at least one term");
    const auto w = dirichlet_uniform(rng, k);
    std::vector<std::pair<double, PureState>> terms;
    for (std::size_t j = 0; j < k; ++j) terms.emplace_back(w[j], random_partition_member(partition, rng));
    double s = 0.0;
    for (auto& t : terms) s += t.first;
    for (auto& t : terms) t.first /= s;
    return mix(terms);
}

/// Convex combination of up to four Haar pure states (full-rank coverage).
inline DensityMatrix random_mixed_state(Rng& rng, std::size_t k = 4) {
    return random_partition_mixture({{1, 2, 3, 4}}, rng, k);
}

}  // namespace bell4
