#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace bell4;

namespace {

// <D4^(1)> on |0> (x) phi where aaa(st) returns <A2 A3 A4> on phi for the a-directions of st.
template <class Triple>
double d1_on_zero_times(const SettingSet& st, Triple aaa) {
    auto with = [&](bool b2, bool b3, bool b4) {
        SettingSet t = st;
        if (b2) t.a[1] = st.b[1];
        if (b3) t.a[2] = st.b[2];
        if (b4) t.a[3] = st.b[3];
        return aaa(t);
    };
    const double b3 = 0.5 * (-with(false, false, false) + with(false, true, true) + with(true, false, true) + with(true, true, false));
    return 0.5 * (st.a[0].z() + st.b[0].z()) * b3 + 0.5 * (st.a[0].z() - st.b[0].z());
}

}  // namespace

TEST(ComplementTriple, AscendingAndValidated) {
    EXPECT_EQ(complement_triple(1), (std::array<int, 3>{2, 3, 4}));
    EXPECT_EQ(complement_triple(3), (std::array<int, 3>{1, 2, 4}));
    EXPECT_THROW(complement_triple(0), input_error);
    EXPECT_THROW(complement_triple(5), input_error);
}

TEST(Mermin, GhzThreeReachesTwo) {
    const auto ghz3 = PureState::normalize({1, 0, 0, 0, 0, 0, 0, 1});
    const auto st = oracle::ghz_settings(1);
    const auto b3 = mermin_b3(st, {2, 3, 4});
    EXPECT_EQ(b3.dim(), 8);
    Eigen::VectorXcd v(8);
    for (int k = 0; k < 8; ++k) v(k) = ghz3[static_cast<std::size_t>(k)];
    EXPECT_NEAR(std::abs((v.adjoint() * b3.eigen() * v)(0, 0)), 2.0, 1e-12);
    EXPECT_THROW(mermin_b3(st, {2, 2, 4}), input_error);
    EXPECT_THROW(mermin_b3(st, {3, 2, 4}), input_error);
}

TEST(BuildD4, HermitianWithSpectralRadiusAtMostTwo) {
    Rng rng(21);
    for (int n = 0; n < 100; ++n) {
        const auto st = oracle::random_settings(rng);
        for (int i = 1; i <= 4; ++i) {
            const auto op = build_d4(st, i);
            EXPECT_TRUE(op.matrix.is_hermitian(1e-12));
            EXPECT_LE(op.matrix.hermitian_eigenvalues().cwiseAbs().maxCoeff(), 2.0 + 1e-12);
        }
    }
}

TEST(BellValue, AllZOnZeroStateIsOne) {
    const auto rho = pure_to_density(PureState::basis("0000"));
    const auto st = SettingSet::uniform(UnitVector3::z_axis());
    for (int i = 1; i <= 4; ++i) EXPECT_NEAR(bell_value(rho, st, i), 1.0, 1e-10);
    EXPECT_NEAR(omega(rho, st), 4.0, 1e-10);
}

TEST(BellValue, GhzFourReachesTwoForEveryOperator) {
    const auto rho = pure_to_density(oracle::ghz4());
    for (int i = 1; i <= 4; ++i) EXPECT_NEAR(std::abs(bell_value(rho, oracle::ghz_settings(i), i)), 2.0, 1e-10);
}

TEST(BellValue, MaximallyMixedGivesZero) {
    Rng rng(2);
    const auto st = oracle::random_settings(rng);
    for (int i = 1; i <= 4; ++i) EXPECT_NEAR(bell_value(DensityMatrix::maximally_mixed(), st, i), 0.0, 1e-14);
}

TEST(BellValue, ZeroQubitTimesGhzThreeReachesTwo) {
    // A single |0> qubit with a1 = b1 = z leaves the Mermin value of the GHZ factor intact.
    const auto rho = pure_to_density(PureState::basis("0").tensor(PureState::normalize({1, 0, 0, 0, 0, 0, 0, 1})));
    auto st = oracle::ghz_settings(1);
    st.a[0] = st.b[0] = UnitVector3::z_axis();
    EXPECT_NEAR(bell_value(rho, st, 1), -2.0, 1e-12);
}

TEST(BellValue, AffineInEachDirection) {
    Rng rng(8);
    for (int n = 0; n < 40; ++n) {
        const auto rho = pure_to_density(haar_random_pure(rng));
        const auto base = RawSettings::from(oracle::random_settings(rng));
        const int i = 1 + static_cast<int>(rng.index(4));
        const int q = static_cast<int>(rng.index(4));
        const bool is_b = rng.index(2) == 1;
        auto f = [&](const Vec3& v) {
            RawSettings s = base;
            (is_b ? s.b : s.a)[static_cast<std::size_t>(q)] = v;
            return detail::bell_value_raw(rho, s, i);
        };
        const Vec3 u = rng.direction().vec(), w = rng.direction().vec();
        const Vec3 uw{u[0] + w[0], u[1] + w[1], u[2] + w[2]};
        EXPECT_NEAR(f(uw) - f(u) - f(w) + f({0, 0, 0}), 0.0, 1e-12);
    }
}

TEST(BellValue, PermutationCovariance) {
    Rng rng(13);
    for (int n = 0; n < 40; ++n) {
        const auto rho = pure_to_density(haar_random_pure(rng));
        const auto st = oracle::random_settings(rng);
        QubitPermutation p{1, 2, 3, 4};
        std::shuffle(p.begin(), p.end(), rng.engine());
        const auto inv = inverse(p);
        const auto rho_p = permute_qubits(rho, p);
        const auto st_p = st.permuted(p);
        for (int i = 1; i <= 4; ++i)
            EXPECT_NEAR(bell_value(rho_p, st_p, inv[static_cast<std::size_t>(i - 1)]), bell_value(rho, st, i), 1e-12);
    }
}

TEST(BellValue, SwappingTripleSettingsKeepsValue) {
    // Relabeling within the complement triple is a symmetry of the Mermin sum.
    Rng rng(17);
    const auto rho = pure_to_density(haar_random_pure(rng));
    const auto st = oracle::random_settings(rng);
    const QubitPermutation p{1, 3, 2, 4};
    EXPECT_NEAR(bell_value(permute_qubits(rho, p), st.permuted(p), 1), bell_value(rho, st, 1), 1e-12);
}

TEST(ClosedForm, FullySeparableZeroState) {
    Rng rng(31);
    const auto rho = pure_to_density(PureState::basis("0000"));
    for (int n = 0; n < 200; ++n) {
        const auto st = oracle::random_settings(rng);
        EXPECT_NEAR(bell_value(rho, st, 1), oracle::fully_separable_d1(st), 1e-10);
    }
}

TEST(ClosedForm, SchmidtPairTimesZeros) {
    Rng rng(32);
    for (int n = 0; n < 200; ++n) {
        const double x = rng.uniform(0, M_PI);
        const auto st = oracle::random_settings(rng);
        const auto rho = pure_to_density(schmidt_pair(x).tensor(PureState::basis("00")));
        EXPECT_NEAR(bell_value(rho, st, 1), oracle::schmidt_d1(st, x), 1e-10);
        EXPECT_NEAR(bell_value(rho, st, 3), oracle::schmidt_d3(st, x), 1e-10);
    }
}

TEST(ClosedForm, TwoSchmidtPairs) {
    Rng rng(33);
    for (int n = 0; n < 200; ++n) {
        const double x = rng.uniform(0, M_PI), y = rng.uniform(0, M_PI);
        const auto st = oracle::random_settings(rng);
        const auto rho = pure_to_density(schmidt_pair(x).tensor(schmidt_pair(y)));
        EXPECT_NEAR(bell_value(rho, st, 1), oracle::schmidt_pair_pair_d1(st, x, y), 1e-10);
    }
}

TEST(ClosedForm, ZeroTimesWType) {
    Rng rng(34);
    for (int n = 0; n < 200; ++n) {
        const auto w = dirichlet_uniform(rng, 4);
        const auto st = oracle::random_settings(rng);
        const auto rho = pure_to_density(PureState::basis("0").tensor(w_type3(w[0], w[1], w[2])));
        const double expect = d1_on_zero_times(st, [&](const SettingSet& t) { return oracle::w_type_aaa(t, w[0], w[1], w[2]); });
        EXPECT_NEAR(bell_value(rho, st, 1), expect, 1e-10);
    }
}

TEST(ClosedForm, ZeroTimesGhzType) {
    Rng rng(35);
    for (int n = 0; n < 200; ++n) {
        const double d = rng.uniform(1e-3, M_PI / 4), a = rng.uniform(1e-3, M_PI / 2), b = rng.uniform(1e-3, M_PI / 2),
                     g = rng.uniform(1e-3, M_PI / 2), phi = rng.uniform(0, 2 * M_PI);
        const auto st = oracle::random_settings(rng);
        const auto rho = pure_to_density(PureState::basis("0").tensor(ghz_type3(d, a, b, g, phi)));
        const double expect = d1_on_zero_times(st, [&](const SettingSet& t) { return oracle::ghz_type_aaa(t, d, a, b, g, phi); });
        EXPECT_NEAR(bell_value(rho, st, 1), expect, 1e-10);
    }
}

TEST(Omega, SumOfSquares) {
    Rng rng(40);
    for (int n = 0; n < 20; ++n) {
        const auto rho = random_mixed_state(rng);
        const auto st = oracle::random_settings(rng);
        double w = 0.0;
        for (int i = 1; i <= 4; ++i) w += std::pow(bell_value(rho, st, i), 2);
        EXPECT_NEAR(omega(rho, st), w, 1e-12);
        EXPECT_LE(omega(rho, st), kOmegaCap);
    }
}

TEST(SettingSet, HalfCombinations) {
    SettingSet st = SettingSet::uniform(UnitVector3::z_axis());
    st.b[1] = UnitVector3::x_axis();
    EXPECT_DOUBLE_EQ(st.s(2)[0], 0.5);
    EXPECT_DOUBLE_EQ(st.s(2)[2], 0.5);
    EXPECT_DOUBLE_EQ(st.t(2)[0], 0.5);
    EXPECT_DOUBLE_EQ(st.t(2)[2], -0.5);
}
