// Maximization of |<D4^(i)>| and of omega over measurement settings.
//
// <D4^(i)> is affine-linear in every single direction vector, so the best
// replacement for one vector with all others fixed is the normalized gradient
// (see-saw). omega is a sum of squares of four such affine functions, and its
// per-vector maximum over the sphere is a trust-region subproblem solved via
// the 3x3 eigen-decomposition plus a 1-D secular search.

#pragma once

#include "bell4/bell_ops.hpp"
#include "bell4/correlation.hpp"
#include "bell4/states.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace bell4 {

struct OptimizeConfig {
    int restarts = 32;
    int max_sweeps = 200;
    double tol = 1e-9;  // absolute objective improvement per sweep
    std::uint64_t seed = 0;
    /// Extra restarts that begin from these settings (after the random ones).
    std::vector<SettingSet> warm_starts;

    void validate() const {
        if (restarts < 1) throw input_error("restarts must be >= 1");
        if (max_sweeps < 1) throw input_error("max_sweeps must be >= 1");
        if (!(tol > 0.0)) throw input_error("tol must be > 0");
    }
};

struct Objective {
    enum class Kind { bell, omega };
    Kind kind = Kind::bell;
    int index = 1;  // operator index for Kind::bell

    std::string name() const { return kind == Kind::omega ? "omega" : "bell_" + std::to_string(index); }
    bool operator==(const Objective&) const = default;
};

struct OptimizeResult {
    double best_value = 0.0;
    SettingSet best_settings = SettingSet::uniform(UnitVector3::z_axis());
    int sweeps_used = 0;  // sweeps of the winning restart
    std::vector<double> restart_values;
    Objective objective;
    /// Objective after every sweep, per restart (first entry is the starting value).
    std::vector<std::vector<double>> sweep_traces;
};

/// One of the eight direction vectors: a_j or b_j of qubit j.
struct Slot {
    int qubit = 1;
    bool is_b = false;
};

namespace detail {

inline Vec3& slot_ref(RawSettings& s, const Slot& slot) {
    auto& arr = slot.is_b ? s.b : s.a;
    return arr.at(static_cast<std::size_t>(slot.qubit - 1));
}

/// Gradient and offset of an affine function of one direction vector, obtained
/// by evaluating at v = 0 and v = e_k. `assign` writes v into the settings.
template <class Eval, class Assign>
std::pair<Vec3, double> affine_probe(RawSettings s, Assign assign, Eval eval) {
    assign(s, Vec3{0, 0, 0});
    const double c0 = eval(s);
    Vec3 g{};
    for (std::size_t k = 0; k < 3; ++k) {
        Vec3 e{};
        e[k] = 1.0;
        assign(s, e);
        g[k] = eval(s) - c0;
    }
    return {g, c0};
}

/// Correlation-tensor form of a state, for fast repeated evaluation of
/// <D4^(i)> = m . c_i + alpha_i . d_i where m_k = <B3 (x) sigma_k>.
class CompiledState {
public:
    explicit CompiledState(const DensityMatrix& rho) : tensor_(correlation_tensor(rho)) {
        for (int i = 1; i <= 4; ++i) {
            const auto tri = complement_triple(i);
            auto& q = quad_[static_cast<std::size_t>(i - 1)];
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    for (int c = 0; c < 3; ++c)
                        for (int k = 0; k < 3; ++k) {
                            std::array<int, 4> mu{};
                            mu[static_cast<std::size_t>(tri[0] - 1)] = a + 1;
                            mu[static_cast<std::size_t>(tri[1] - 1)] = b + 1;
                            mu[static_cast<std::size_t>(tri[2] - 1)] = c + 1;
                            mu[static_cast<std::size_t>(i - 1)] = k + 1;
                            q[static_cast<std::size_t>(((a * 3 + b) * 3 + c) * 3 + k)] = tensor_.at(mu[0], mu[1], mu[2], mu[3]);
                        }
            singles_[static_cast<std::size_t>(i - 1)] = tensor_.single(i);
        }
    }

    const CorrelationTensor& tensor() const { return tensor_; }
    const std::array<double, 81>& quad(int i) const { return quad_[static_cast<std::size_t>(i - 1)]; }
    const Vec3& single(int i) const { return singles_[static_cast<std::size_t>(i - 1)]; }

    /// m_k = <B3^(i) (x) sigma_k on qubit i>.
    Vec3 mermin_vector(const RawSettings& s, int i) const {
        const auto tri = complement_triple(i);
        const auto& ap = s.a[static_cast<std::size_t>(tri[0] - 1)];
        const auto& bp = s.b[static_cast<std::size_t>(tri[0] - 1)];
        const auto& aq = s.a[static_cast<std::size_t>(tri[1] - 1)];
        const auto& bq = s.b[static_cast<std::size_t>(tri[1] - 1)];
        const auto& ar = s.a[static_cast<std::size_t>(tri[2] - 1)];
        const auto& br = s.b[static_cast<std::size_t>(tri[2] - 1)];
        const auto& q = quad(i);
        // Contract qubit p with a_p and b_p: X[b][c][k].
        std::array<double, 27> xa{}, xb{};
        for (int a = 0; a < 3; ++a)
            for (int j = 0; j < 27; ++j) {
                const double v = q[static_cast<std::size_t>(a * 27 + j)];
                xa[static_cast<std::size_t>(j)] += v * ap[static_cast<std::size_t>(a)];
                xb[static_cast<std::size_t>(j)] += v * bp[static_cast<std::size_t>(a)];
            }
        Vec3 m{};
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c)
                for (int k = 0; k < 3; ++k) {
                    const auto j = static_cast<std::size_t>((b * 3 + c) * 3 + k);
                    const auto bi = static_cast<std::size_t>(b);
                    const auto ci = static_cast<std::size_t>(c);
                    m[static_cast<std::size_t>(k)] += -xa[j] * aq[bi] * ar[ci] + xa[j] * bq[bi] * br[ci] +
                                                      xb[j] * aq[bi] * br[ci] + xb[j] * bq[bi] * ar[ci];
                }
        for (auto& x : m) x *= 0.5;
        return m;
    }

    double bell(const RawSettings& s, int i) const {
        const auto si = static_cast<std::size_t>(i - 1);
        Vec3 c{}, d{};
        for (std::size_t k = 0; k < 3; ++k) {
            c[k] = 0.5 * (s.a[si][k] + s.b[si][k]);
            d[k] = 0.5 * (s.a[si][k] - s.b[si][k]);
        }
        return dot(mermin_vector(s, i), c) + dot(single(i), d);
    }

    double omega(const RawSettings& s) const {
        double w = 0.0;
        for (int i = 1; i <= 4; ++i) {
            const double v = bell(s, i);
            w += v * v;
        }
        return w;
    }

private:
    CorrelationTensor tensor_;
    std::array<std::array<double, 81>, 4> quad_{};
    std::array<Vec3, 4> singles_{};
};

inline RawSettings random_raw_settings(Rng& rng) {
    RawSettings s;
    for (std::size_t j = 0; j < 4; ++j) {
        s.a[j] = rng.direction().vec();
        s.b[j] = rng.direction().vec();
    }
    return s;
}

/// Visiting order: the three qubits other than `last` ascending, then `last`.
inline std::array<int, 4> sweep_order(int last) {
    const auto t = complement_triple(last);
    return {t[0], t[1], t[2], last};
}

/// max over unit v of v^T G v + 2 h.v (G symmetric PSD 3x3). Returns candidate
/// maximizers; the caller evaluates them against the incumbent.
inline std::vector<Vec3> sphere_quadratic_candidates(const Eigen::Matrix3d& g, const Eigen::Vector3d& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(g);
    const Eigen::Vector3d lam = es.eigenvalues();  // ascending
    const Eigen::Matrix3d vec = es.eigenvectors();
    const Eigen::Vector3d hh = vec.transpose() * h;
    const double lmax = lam(2);
    const double hn = h.norm();
    std::vector<Vec3> out;
    auto push = [&](const Eigen::Vector3d& v) {
        const double n = v.norm();
        if (n > 1e-14) out.push_back({v(0) / n, v(1) / n, v(2) / n});
    };
    const double scale = std::max({std::abs(lmax), hn, 1e-300});
    if (hn > 1e-14 * scale) {
        auto phi = [&](double mu) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) {
                const double den = mu - lam(k);
                if (den <= 0.0) return std::numeric_limits<double>::infinity();
                s += hh(k) * hh(k) / (den * den);
            }
            return s;
        };
        double lo = lmax, hi = lmax + hn;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
            const double mid = 0.5 * (lo + hi);
            (phi(mid) > 1.0 ? lo : hi) = mid;
        }
        Eigen::Vector3d y;
        for (int k = 0; k < 3; ++k) y(k) = hh(k) / std::max(hi - lam(k), 1e-300);
        push(vec * y);
        // Hard case: h (nearly) orthogonal to the top eigenvector.
        Eigen::Vector3d rest = Eigen::Vector3d::Zero();
        for (int k = 0; k < 2; ++k)
            if (lmax - lam(k) > 1e-12 * scale) rest(k) = hh(k) / (lmax - lam(k));
        const double rn2 = rest.squaredNorm();
        if (rn2 < 1.0) {
            for (double sgn : {1.0, -1.0}) {
                Eigen::Vector3d z = rest;
                z(2) = sgn * std::sqrt(1.0 - rn2);
                push(vec * z);
            }
        }
    } else {
        // Pure quadratic form: principal eigenvector, both signs; a degenerate
        // top eigenspace leaves the incumbent in place (no candidate).
        if (lmax - lam(1) > 1e-12 * scale) {
            push(vec.col(2));
            push(-vec.col(2));
        }
    }
    return out;
}

}  // namespace detail

/// g such that <D4^(i)> = g . v + c, v the chosen direction vector (dense evaluation).
inline Vec3 direction_gradient(const DensityMatrix& rho, const SettingSet& settings, int i, const Slot& slot) {
    complement_triple(i);
    if (slot.qubit < 1 || slot.qubit > 4) throw input_error("slot qubit must be in 1..4");
    auto assign = [&](RawSettings& s, const Vec3& v) { detail::slot_ref(s, slot) = v; };
    auto eval = [&](const RawSettings& s) { return detail::bell_value_raw(rho, s, i); };
    return detail::affine_probe(RawSettings::from(settings), assign, eval).first;
}

namespace detail {

/// Core see-saw loop over |f| where f is affine in every slot.
/// `tie_special` couples b_i to a_i (objective B3 (x) A_i) for the tied phase.
template <class F>
int seesaw_run(RawSettings& s, int special, bool tie_special, int max_sweeps, double tol, F f, std::vector<double>& trace) {
    const auto order = sweep_order(special);
    const auto si = static_cast<std::size_t>(special - 1);
    double cur = std::abs(f(s));
    int sweeps = 0;
    for (; sweeps < max_sweeps;) {
        const double before = cur;
        for (int q : order) {
            for (bool is_b : {false, true}) {
                const bool tied_slot = tie_special && q == special;
                if (tied_slot && is_b) continue;
                const Slot slot{q, is_b};
                auto assign = [&](RawSettings& t, const Vec3& v) {
                    slot_ref(t, slot) = v;
                    if (tied_slot) t.b[si] = v;
                };
                const auto [g, c0] = affine_probe(s, assign, f);
                const double gn = norm(g);
                if (!(gn > 1e-14)) continue;  // flat direction: keep incumbent
                const double sgn = c0 >= 0.0 ? 1.0 : -1.0;
                RawSettings cand = s;
                assign(cand, Vec3{sgn * g[0] / gn, sgn * g[1] / gn, sgn * g[2] / gn});
                const double val = std::abs(f(cand));
                if (val >= cur) {
                    s = cand;
                    cur = val;
                }
            }
        }
        ++sweeps;
        trace.push_back(cur);
        if (cur - before < tol) break;
    }
    return sweeps;
}

inline OptimizeResult finish(OptimizeResult res, const std::vector<RawSettings>& finals,
                             const std::function<double(const SettingSet&)>& dense_check) {
    std::size_t best = 0;
    for (std::size_t r = 1; r < res.restart_values.size(); ++r)
        if (res.restart_values[r] > res.restart_values[best]) best = r;
    res.best_value = res.restart_values[best];
    res.best_settings = finals[best].to_unit();
    res.sweeps_used = static_cast<int>(res.sweep_traces[best].size()) - 1;
    const double recheck = dense_check(res.best_settings);
    if (std::abs(recheck - res.best_value) > 1e-10)
        throw numerical_error("optimizer result does not reproduce under dense evaluation (" + std::to_string(recheck) +
                              " vs " + std::to_string(res.best_value) + ")");
    return res;
}

}  // namespace detail

/// Maximizes |<D4^(i)>| over all settings by see-saw with random restarts.
/// Even-numbered random restarts begin with a_i = b_i tied (objective B3 (x) A_i)
/// before releasing the tie; this escapes the plateau a_i = -b_i where every
/// other slot has zero gradient.
inline OptimizeResult seesaw_bell(const DensityMatrix& rho, int i, const OptimizeConfig& cfg) {
    cfg.validate();
    complement_triple(i);
    const detail::CompiledState cs(rho);
    auto f = [&](const RawSettings& s) { return cs.bell(s, i); };
    OptimizeResult res;
    res.objective = {Objective::Kind::bell, i};
    std::vector<RawSettings> finals;
    const auto total = static_cast<std::size_t>(cfg.restarts) + cfg.warm_starts.size();
    for (std::size_t r = 0; r < total; ++r) {
        RawSettings s;
        bool tied = false;
        if (r < static_cast<std::size_t>(cfg.restarts)) {
            Rng rng = Rng::stream(cfg.seed, r);
            s = detail::random_raw_settings(rng);
            tied = (r % 2 == 0);
            if (tied) s.b[static_cast<std::size_t>(i - 1)] = s.a[static_cast<std::size_t>(i - 1)];
        } else {
            s = RawSettings::from(cfg.warm_starts[r - static_cast<std::size_t>(cfg.restarts)]);
        }
        std::vector<double> trace{std::abs(f(s))};
        if (tied) detail::seesaw_run(s, i, true, cfg.max_sweeps, cfg.tol, f, trace);
        detail::seesaw_run(s, i, false, cfg.max_sweeps, cfg.tol, f, trace);
        res.restart_values.push_back(trace.back());
        res.sweep_traces.push_back(std::move(trace));
        finals.push_back(s);
    }
    return detail::finish(std::move(res), finals,
                          [&](const SettingSet& st) { return std::abs(bell_value(rho, st, i)); });
}

/// Maximizes omega = sum_i <D4^(i)>^2 over all settings.
inline OptimizeResult seesaw_omega(const DensityMatrix& rho, const OptimizeConfig& cfg) {
    cfg.validate();
    const detail::CompiledState cs(rho);
    OptimizeResult res;
    res.objective = {Objective::Kind::omega, 0};
    std::vector<RawSettings> finals;
    const auto total = static_cast<std::size_t>(cfg.restarts) + cfg.warm_starts.size();
    for (std::size_t r = 0; r < total; ++r) {
        RawSettings s;
        if (r < static_cast<std::size_t>(cfg.restarts)) {
            Rng rng = Rng::stream(cfg.seed ^ 0x6f6d656761ULL, r);
            s = detail::random_raw_settings(rng);
        } else {
            s = RawSettings::from(cfg.warm_starts[r - static_cast<std::size_t>(cfg.restarts)]);
        }
        double cur = cs.omega(s);
        std::vector<double> trace{cur};
        for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
            const double before = cur;
            for (int q = 1; q <= 4; ++q) {
                for (bool is_b : {false, true}) {
                    const Slot slot{q, is_b};
                    Eigen::Matrix3d g = Eigen::Matrix3d::Zero();
                    Eigen::Vector3d h = Eigen::Vector3d::Zero();
                    for (int op = 1; op <= 4; ++op) {
                        const auto [gv, c0] = detail::affine_probe(
                            s, [&](RawSettings& t, const Vec3& v) { detail::slot_ref(t, slot) = v; },
                            [&](const RawSettings& t) { return cs.bell(t, op); });
                        const Eigen::Vector3d ge(gv[0], gv[1], gv[2]);
                        g += ge * ge.transpose();
                        h += c0 * ge;
                    }
                    for (const auto& v : detail::sphere_quadratic_candidates(g, h)) {
                        RawSettings cand = s;
                        detail::slot_ref(cand, slot) = v;
                        const double val = cs.omega(cand);
                        if (val > cur) {
                            s = cand;
                            cur = val;
                        }
                    }
                }
            }
            trace.push_back(cur);
            if (cur - before < cfg.tol) break;
        }
        if (cur > kOmegaCap + 1e-8) throw numerical_error("omega exceeded 16: " + std::to_string(cur));
        res.restart_values.push_back(cur);
        res.sweep_traces.push_back(std::move(trace));
        finals.push_back(s);
    }
    return detail::finish(std::move(res), finals, [&](const SettingSet& st) { return omega(rho, st); });
}

// ---------------------------------------------------------------------------
// Grid oracle
// ---------------------------------------------------------------------------

enum class GridPlane { xy, xz, both };

struct GridResult {
    double value = 0.0;
    SettingSet settings = SettingSet::uniform(UnitVector3::z_axis());
    std::uint64_t evaluations = 0;
};

/// Exhaustive search with every direction vector restricted to one coordinate
/// plane. The six vectors of the Mermin part run over a grid of spacing
/// `resolution_deg`; for each grid point the two vectors of qubit i are set to
/// their exact in-plane optimum. The result is a lower bound on the supremum of
/// |<D4^(i)>|, independent of the see-saw path.
inline GridResult grid_search(const DensityMatrix& rho, int i, double resolution_deg, GridPlane plane = GridPlane::both,
                              double budget = 5e8) {
    complement_triple(i);
    if (!(resolution_deg > 0.0 && resolution_deg <= 180.0)) throw input_error("grid resolution must lie in (0, 180] degrees");
    if (plane == GridPlane::both) {
        auto r1 = grid_search(rho, i, resolution_deg, GridPlane::xy, budget);
        auto r2 = grid_search(rho, i, resolution_deg, GridPlane::xz, budget);
        const auto evals = r1.evaluations + r2.evaluations;
        auto& best = (r2.value > r1.value) ? r2 : r1;
        best.evaluations = evals;
        return best;
    }
    const int n = static_cast<int>(std::floor(360.0 / resolution_deg + 1e-9));
    // (a_p, b_p) -> (-a_p, -b_p) flips m and leaves the optimum unchanged; the
    // grid is closed under negation only when n is even.
    const int nhalf = (n % 2 == 0) ? n / 2 : n;
    const double count = static_cast<double>(nhalf) * std::pow(static_cast<double>(n), 5);
    if (count > budget)
        throw input_error("grid of " + std::to_string(count) + " points exceeds the budget of " + std::to_string(budget));

    const Vec3 e1{1, 0, 0};
    const Vec3 e2 = plane == GridPlane::xy ? Vec3{0, 1, 0} : Vec3{0, 0, 1};
    std::vector<Vec3> dirs(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double t = k * resolution_deg * std::numbers::pi / 180.0;
        for (std::size_t c = 0; c < 3; ++c) dirs[static_cast<std::size_t>(k)][c] = std::cos(t) * e1[c] + std::sin(t) * e2[c];
    }
    const detail::CompiledState cs(rho);
    const auto& q = cs.quad(i);
    const Vec3& single = cs.single(i);
    const double s1 = dot(single, e1), s2 = dot(single, e2);

    // Projected onto the plane, the k index of the quad tensor becomes 2 components.
    std::array<double, 54> qp{};
    for (int j = 0; j < 27; ++j)
        for (int k = 0; k < 3; ++k) {
            const double v = q[static_cast<std::size_t>(j * 3 + k)];
            qp[static_cast<std::size_t>(j * 2 + 0)] += v * e1[static_cast<std::size_t>(k)];
            qp[static_cast<std::size_t>(j * 2 + 1)] += v * e2[static_cast<std::size_t>(k)];
        }

    double best = -1.0;
    std::array<int, 6> best_idx{};
    double best_m1 = 0, best_m2 = 0;
    std::uint64_t evals = 0;
    auto contract_first = [&](const std::array<double, 54>& src, const Vec3& u, std::array<double, 18>& dst) {
        dst.fill(0.0);
        for (int a = 0; a < 3; ++a)
            for (int j = 0; j < 18; ++j) dst[static_cast<std::size_t>(j)] += src[static_cast<std::size_t>(a * 18 + j)] * u[static_cast<std::size_t>(a)];
    };
    auto contract_second = [](const std::array<double, 18>& src, const Vec3& u, std::array<double, 6>& dst) {
        dst.fill(0.0);
        for (int b = 0; b < 3; ++b)
            for (int j = 0; j < 6; ++j) dst[static_cast<std::size_t>(j)] += src[static_cast<std::size_t>(b * 6 + j)] * u[static_cast<std::size_t>(b)];
    };
    std::array<double, 18> xa{}, xb{};
    std::array<double, 6> yaa{}, yab{}, yba{}, ybb{};
    std::vector<std::array<double, 2>> z1(static_cast<std::size_t>(n)), z2(static_cast<std::size_t>(n));
    for (int iap = 0; iap < nhalf; ++iap) {
        contract_first(qp, dirs[static_cast<std::size_t>(iap)], xa);
        for (int ibp = 0; ibp < n; ++ibp) {
            contract_first(qp, dirs[static_cast<std::size_t>(ibp)], xb);
            for (int iaq = 0; iaq < n; ++iaq) {
                contract_second(xa, dirs[static_cast<std::size_t>(iaq)], yaa);
                contract_second(xb, dirs[static_cast<std::size_t>(iaq)], yba);
                for (int ibq = 0; ibq < n; ++ibq) {
                    contract_second(xa, dirs[static_cast<std::size_t>(ibq)], yab);
                    contract_second(xb, dirs[static_cast<std::size_t>(ibq)], ybb);
                    // m = 1/2 (-Yaa.a_r + Yab.b_r + Yba.b_r + Ybb.a_r), split by a_r and b_r.
                    for (int k = 0; k < n; ++k) {
                        const auto& d = dirs[static_cast<std::size_t>(k)];
                        auto& u = z1[static_cast<std::size_t>(k)];
                        auto& w = z2[static_cast<std::size_t>(k)];
                        u = {0, 0};
                        w = {0, 0};
                        for (int c = 0; c < 3; ++c)
                            for (int t = 0; t < 2; ++t) {
                                const auto j = static_cast<std::size_t>(c * 2 + t);
                                u[static_cast<std::size_t>(t)] += (-yaa[j] + ybb[j]) * d[static_cast<std::size_t>(c)];
                                w[static_cast<std::size_t>(t)] += (yab[j] + yba[j]) * d[static_cast<std::size_t>(c)];
                            }
                    }
                    for (int iar = 0; iar < n; ++iar) {
                        const auto& u = z1[static_cast<std::size_t>(iar)];
                        for (int ibr = 0; ibr < n; ++ibr) {
                            const auto& w = z2[static_cast<std::size_t>(ibr)];
                            const double m1 = 0.5 * (u[0] + w[0]), m2 = 0.5 * (u[1] + w[1]);
                            const double v = 0.5 * (std::hypot(m1 + s1, m2 + s2) + std::hypot(m1 - s1, m2 - s2));
                            if (v > best) {
                                best = v;
                                best_idx = {iap, ibp, iaq, ibq, iar, ibr};
                                best_m1 = m1;
                                best_m2 = m2;
                            }
                        }
                    }
                    evals += static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n);
                }
            }
        }
    }

    const auto tri = complement_triple(i);
    SettingSet st = SettingSet::uniform(UnitVector3::x_axis());
    auto uv = [&](int k) { return UnitVector3(dirs[static_cast<std::size_t>(k)]); };
    st.a[static_cast<std::size_t>(tri[0] - 1)] = uv(best_idx[0]);
    st.b[static_cast<std::size_t>(tri[0] - 1)] = uv(best_idx[1]);
    st.a[static_cast<std::size_t>(tri[1] - 1)] = uv(best_idx[2]);
    st.b[static_cast<std::size_t>(tri[1] - 1)] = uv(best_idx[3]);
    st.a[static_cast<std::size_t>(tri[2] - 1)] = uv(best_idx[4]);
    st.b[static_cast<std::size_t>(tri[2] - 1)] = uv(best_idx[5]);
    auto in_plane = [&](double x1, double x2) {
        const double h = std::hypot(x1, x2);
        if (h < 1e-14) return UnitVector3(e1);
        return UnitVector3::normalized({(x1 * e1[0] + x2 * e2[0]) / h, (x1 * e1[1] + x2 * e2[1]) / h, (x1 * e1[2] + x2 * e2[2]) / h});
    };
    const auto si = static_cast<std::size_t>(i - 1);
    st.a[si] = in_plane(best_m1 + s1, best_m2 + s2);
    st.b[si] = in_plane(best_m1 - s1, best_m2 - s2);
    return {best, st, evals};
}

/// Maximum of |<D4^(i)>| over the planar grid (see grid_search).
inline double grid_oracle(const DensityMatrix& rho, int i, double resolution_deg = 15.0, GridPlane plane = GridPlane::both) {
    return grid_search(rho, i, resolution_deg, plane).value;
}

}  // namespace bell4
