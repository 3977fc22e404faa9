#ifndef ELLFM_VERIFY_HPP
#define ELLFM_VERIFY_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ellfm/closed_forms.hpp"
#include "ellfm/errors.hpp"
#include "ellfm/labels.hpp"
#include "ellfm/lattice.hpp"
#include "ellfm/rmatrix.hpp"
#include "ellfm/theta.hpp"
#include "ellfm/weights.hpp"

namespace ellfm
{

/// Largest sizes covered by the suites.
struct Envelope
{
    int max_L = 4;
    int max_k = 2;
    int max_k1 = 2;
    int max_k2 = 2;
    int max_L1 = 2;
    int max_L2 = 3;
};

/// Box from which random parameters are drawn. Real parts of gamma, lambda and the spectral
/// variables lie in [-re, re], imaginary parts in [-im, im].
struct SamplingBox
{
    double tau_im_lo = 0.5;
    double tau_im_hi = 1.2;
    double tau_re = 0.5;
    double re = 0.5;
    double im = 0.3;
};

struct SuiteConfig
{
    Envelope envelope;
    SamplingBox box;
    /// Box for the additive/multiplicative comparison, which needs Re of every argument in (-1/2, 1/2].
    SamplingBox narrow_box{0.5, 1.2, 0.5, 0.04, 0.3};
    std::uint64_t seed = 42;
    int draws = 3;
    double identity_tol = 1e-8;
    double equivalence_tol = 1e-9;
    double residual_tol = 1e-10;
    int max_rejections = 1000;
    /// Rescales one R-matrix entry by mutation_factor in every lattice evaluation.
    std::optional<WeightKey> mutation;
    cplx mutation_factor{1.0 + 1e-4, 0.0};
    /// Shifts one psi exponent in the weight-function evaluation.
    std::optional<PsiTweak> psi_tweak;
};

/// Sizes of the spectral families to draw.
struct DrawShape
{
    int k1 = 0;
    int k2 = 0;
    int L1 = 0;
    int L2 = 0;
};

struct ParameterDraw
{
    cplx tau{0.0, 1.0};
    cplx gamma{0.0, 0.0};
    std::vector<cplx> lambda;
    std::vector<cplx> z1;
    std::vector<cplx> z2;
    std::vector<cplx> w1;
    std::vector<cplx> w2;
    int attempts = 0;
};

struct CaseRecord
{
    std::string id;
    std::string label;
    std::string params_digest;
    double max_rel_error = 0.0;
    std::string status = "pass";

    bool pass() const { return status == "pass"; }
};

struct SuiteReport
{
    int schema = 1;
    std::string suite;
    std::uint64_t seed = 0;
    std::vector<CaseRecord> cases;
    double worst = 0.0;
    std::string status = "pass";
    double wall_time_s = 0.0;

    nlohmann::ordered_json to_json(bool include_timing = true) const
    {
        nlohmann::ordered_json j;
        j["schema"] = schema;
        j["suite"] = suite;
        j["seed"] = seed;
        j["status"] = status;
        j["worst"] = worst;
        j["case_count"] = cases.size();
        auto arr = nlohmann::ordered_json::array();
        for (const auto &c : cases) {
            nlohmann::ordered_json e;
            e["id"] = c.id;
            e["label"] = c.label;
            e["params_digest"] = c.params_digest;
            e["max_rel_error"] = c.max_rel_error;
            e["pass"] = c.pass();
            e["status"] = c.status;
            arr.push_back(std::move(e));
        }
        j["cases"] = std::move(arr);
        if (include_timing) {
            j["wall_time_s"] = wall_time_s;
        }
        return j;
    }

    std::string to_csv() const
    {
        std::ostringstream os;
        os << "id,label,params_digest,max_rel_error,pass,status\n";
        os.precision(17);
        for (const auto &c : cases) {
            os << c.id << ",\"" << c.label << "\"," << c.params_digest << ',' << c.max_rel_error << ','
               << (c.pass() ? "true" : "false") << ',' << c.status << '\n';
        }
        return os.str();
    }

    /// 0 all pass, 1 identity failure, 2 conditioning failure only.
    int exit_code() const
    {
        if (status == "fail") {
            return 1;
        }
        return status == "conditioning" ? 2 : 0;
    }
};

inline constexpr std::uint64_t fnv_offset = 1469598103934665603ULL;

inline std::uint64_t fnv1a(const void *data, std::size_t n, std::uint64_t h = fnv_offset)
{
    const auto *p = static_cast<const unsigned char *>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::uint64_t case_seed(std::uint64_t seed, std::string_view key)
{
    std::uint64_t h = fnv1a(&seed, sizeof seed);
    return fnv1a(key.data(), key.size(), h);
}

inline std::string params_digest(const ParameterDraw &d)
{
    std::uint64_t h = fnv_offset;
    auto mix = [&h](cplx x) {
        const double v[2] = {x.real(), x.imag()};
        h = fnv1a(v, sizeof v, h);
    };
    mix(d.tau);
    mix(d.gamma);
    for (const auto *v : {&d.lambda, &d.z1, &d.z2, &d.w1, &d.w2}) {
        for (cplx x : *v) {
            mix(x);
        }
        h = fnv1a("|", 1, h);
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

/// Theta arguments whose vanishing would make a denominator, a cross ratio or a probe value
/// degenerate: gamma, lambda_a - lambda_b + j gamma, spectral differences and their gamma shifts.
inline std::vector<cplx> guard_arguments(const ParameterDraw &d)
{
    std::vector<cplx> g{d.gamma};
    const int span = static_cast<int>(d.z1.size() + d.z2.size() + d.w1.size() + d.w2.size()) + 3;
    for (std::size_t a = 0; a < d.lambda.size(); ++a) {
        for (std::size_t b = a + 1; b < d.lambda.size(); ++b) {
            for (int j = -span; j <= span; ++j) {
                g.push_back(d.lambda[a] - d.lambda[b] + double(j) * d.gamma);
            }
        }
    }
    auto within = [&g](const std::vector<cplx> &v) {
        for (std::size_t a = 0; a < v.size(); ++a) {
            for (std::size_t b = a + 1; b < v.size(); ++b) {
                g.push_back(v[a] - v[b]);
            }
        }
    };
    within(d.z1);
    within(d.z2);
    std::vector<cplx> rows = d.z1;
    rows.insert(rows.end(), d.z2.begin(), d.z2.end());
    std::vector<cplx> cols = d.w1;
    cols.insert(cols.end(), d.w2.begin(), d.w2.end());
    cols.insert(cols.end(), d.z2.begin(), d.z2.end());
    for (cplx r : rows) {
        for (cplx c : cols) {
            if (r == c) {
                continue;
            }
            for (int j = -1; j <= 1; ++j) {
                g.push_back(r - c + double(j) * d.gamma);
            }
        }
    }
    return g;
}

/// True when every guarded |[arg]| is at least threshold times their median and clear of the pole guard.
inline bool is_well_conditioned(const ThetaContext &ctx, const ParameterDraw &d, double threshold = 1e-4)
{
    const auto args = guard_arguments(d);
    std::vector<double> mags;
    mags.reserve(args.size());
    for (cplx a : args) {
        mags.push_back(std::abs(theta_additive(ctx, a)));
    }
    std::vector<double> sorted = mags;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2), sorted.end());
    const double median = sorted[sorted.size() / 2];
    return std::all_of(mags.begin(), mags.end(), [&](double m) { return m >= threshold * median && m > 1e-10 * ctx.scale(); });
}

/// Seeded draw inside `box`, redrawn until well conditioned.
inline ParameterDraw sample_parameters(const SuiteConfig &cfg, std::string_view case_key, const DrawShape &shape,
                                       const SamplingBox &box)
{
    std::mt19937_64 rng(case_seed(cfg.seed, case_key));
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> tau_im(box.tau_im_lo, box.tau_im_hi);
    auto pt = [&]() {
        const double re = box.re * unit(rng);
        const double im = box.im * unit(rng);
        return cplx{re, im};
    };
    auto family = [&](int n) {
        std::vector<cplx> v;
        for (int i = 0; i < n; ++i) {
            v.push_back(pt());
        }
        return v;
    };
    for (int attempt = 1; attempt <= cfg.max_rejections; ++attempt) {
        ParameterDraw d;
        const double tre = box.tau_re * unit(rng);
        d.tau = cplx{tre, tau_im(rng)};
        d.gamma = pt();
        d.lambda = family(3);
        d.z1 = family(shape.k1);
        d.z2 = family(shape.k2);
        d.w1 = family(shape.L1);
        d.w2 = family(shape.L2);
        d.attempts = attempt;
        if (is_well_conditioned(ThetaContext(d.tau), d)) {
            return d;
        }
    }
    throw conditioning_error("sample_parameters: no well-conditioned draw for case " + std::string(case_key));
}

inline ParameterDraw sample_parameters(const SuiteConfig &cfg, std::string_view case_key, const DrawShape &shape)
{
    return sample_parameters(cfg, case_key, shape, cfg.box);
}

enum class QpKind
{
    one_shift,
    tau_shift
};

/// Expected W(w_L + s) / W(w_L) for I_k = L.
inline cplx expected_qp_factor(QpKind kind, const ThetaContext &ctx, const BaseLattice &lat)
{
    lat.validate();
    const int k = lat.label.k();
    const int L = lat.label.L;
    if (k == 0 || lat.label.positions.back() != L) {
        throw precondition_error("expected_qp_factor: needs I_k = L");
    }
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    if (kind == QpKind::one_shift) {
        return {sign, 0.0};
    }
    cplx sum_z{0.0, 0.0};
    for (cplx z : lat.z) {
        sum_z += z;
    }
    const cplx e = double(k) * lat.w.back() - sum_z + lat.params.lambda[0] - lat.params.lambda[1] +
                   lat.params.gamma * double(L - k);
    return sign * std::exp(-2.0 * pi * I * e - pi * I * double(k) * ctx.tau());
}

/// Expected W(w2_{L2} + s) / W(w2_{L2}) for i^(2)_{L2} in {1,2}.
inline cplx expected_qp_factor(QpKind kind, const ThetaContext &ctx, const FMLattice &lat)
{
    lat.validate();
    const FMLabel &lb = lat.label;
    if (lb.k2() == 0 || lb.I2().back() != lb.L2()) {
        throw precondition_error("expected_qp_factor: needs i^(2)_{L2} in {1,2}");
    }
    const int k2 = lb.k2();
    const double sign = (k2 % 2 == 0) ? 1.0 : -1.0;
    if (kind == QpKind::one_shift) {
        return {sign, 0.0};
    }
    const int col = lb.colors2().back();
    cplx sum_z{0.0, 0.0};
    for (cplx z : lat.z2) {
        sum_z += z;
    }
    const cplx e = double(k2) * lat.w2.back() - sum_z + lat.params.lambda[static_cast<std::size_t>(col - 1)] -
                   lat.params.lambda[2] + lat.params.gamma * double(lb.L2() - color_count(lb, lb.L2(), col));
    return sign * std::exp(-2.0 * pi * I * e - pi * I * double(k2) * ctx.tau());
}

inline double rel_error(cplx a, cplx b)
{
    const double s = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / s;
}

inline std::string label_string(const BaseLabel &lb)
{
    return "L=" + std::to_string(lb.L) + " I=" + detail::describe(lb.positions);
}

inline std::string label_string(const FMLabel &lb)
{
    return "{" + std::to_string(lb.k1()) + "," + std::to_string(lb.k2()) + "," + std::to_string(lb.L1()) + "," +
           std::to_string(lb.L2()) + "} I1=" + detail::describe(lb.I1()) + " I2=" + detail::describe(lb.I2());
}

namespace detail
{

class SuiteRunner
{
public:
    SuiteRunner(const SuiteConfig &cfg, SuiteReport &rep) : m_cfg(cfg), m_rep(rep) {}

    // Runs `body`, which returns the max relative error; maps pole and conditioning errors to
    // the conditioning status.
    void run_case(const std::string &id, const std::string &label, const std::string &digest, double tol,
                  const std::function<double()> &body)
    {
        CaseRecord rec{id, label, digest, 0.0, "pass"};
        try {
            const double err = body();
            rec.max_rel_error = err;
            if (!(err <= tol)) {
                rec.status = "fail";
            }
        } catch (const pole_error &) {
            rec.status = "conditioning";
        } catch (const conditioning_error &) {
            rec.status = "conditioning";
        } catch (const domain_error &) {
            rec.status = "conditioning";
        }
        m_rep.cases.push_back(std::move(rec));
    }

    RContext rcontext(int rank, const ThetaContext &th) const
    {
        RContext ctx(rank, th);
        if (m_cfg.mutation) {
            const WeightKey &k = *m_cfg.mutation;
            if (std::max({k.a_in, k.b_in, k.a_out, k.b_out}) <= rank) {
                ctx = ctx.perturbed(k, m_cfg.mutation_factor);
            }
        }
        return ctx;
    }

    const SuiteConfig &cfg() const { return m_cfg; }

private:
    const SuiteConfig &m_cfg;
    SuiteReport &m_rep;
};

inline DynParams base_params(const ParameterDraw &d)
{
    return {{d.lambda[0], d.lambda[1]}, d.gamma};
}

inline DynParams fm_params(const ParameterDraw &d)
{
    return {d.lambda, d.gamma};
}

inline std::string draw_key(const std::string &prefix, int draw)
{
    return prefix + "#" + std::to_string(draw);
}

// Visits every FM label inside the envelope.
template <typename F>
void for_each_fm_size(const Envelope &env, bool l1_zero_only, F &&f)
{
    for (int k1 = 0; k1 <= env.max_k1; ++k1) {
        for (int k2 = 0; k2 <= env.max_k2; ++k2) {
            for (int L1 = 0; L1 <= (l1_zero_only ? 0 : env.max_L1); ++L1) {
                for (int L2 = 0; L2 <= env.max_L2; ++L2) {
                    auto labels = enumerate_labels(k1, k2, L1, L2);
                    if (!labels.empty()) {
                        f(DrawShape{k1, k2, L1, L2}, labels);
                    }
                }
            }
        }
    }
}

template <typename F>
void for_each_base_size(const Envelope &env, F &&f)
{
    for (int L = 1; L <= env.max_L; ++L) {
        for (int k = 0; k <= std::min(L, env.max_k); ++k) {
            f(L, k, enumerate_base_labels(L, k));
        }
    }
}

inline std::string shape_key(const DrawShape &s)
{
    return std::to_string(s.k1) + "," + std::to_string(s.k2) + "," + std::to_string(s.L1) + "," + std::to_string(s.L2);
}

inline FMLattice fm_lattice(const ParameterDraw &d, const FMLabel &lb)
{
    return FMLattice{d.z1, d.z2, d.w1, d.w2, fm_params(d), lb};
}

inline BaseLattice base_lattice(const ParameterDraw &d, const BaseLabel &lb)
{
    return BaseLattice{d.z1, d.w1, base_params(d), lb};
}

// ---- theta ----

inline void suite_theta(SuiteRunner &run)
{
    const SuiteConfig &cfg = run.cfg();
    const cplx taus[] = {{0.0, 0.6}, {0.0, 0.9}, {0.3, 0.8}};
    for (cplx tau : taus) {
        const ThetaContext th(tau);
        std::ostringstream tk;
        tk << "tau=" << tau.real() << "+" << tau.imag() << "i";
        const std::string key = tk.str();
        std::mt19937_64 rng(case_seed(cfg.seed, "theta/" + key));
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        std::vector<cplx> zs;
        for (int i = 0; i < 100; ++i) {
            const double re = unit(rng);
            const double im = tau.imag() * unit(rng);
            zs.push_back({re, im});
        }
        ParameterDraw dg;
        dg.tau = tau;
        dg.z1 = zs;
        const std::string digest = params_digest(dg);
        run.run_case("theta.oddness", key, digest, 1e-12, [&] {
            double e = 0.0;
            for (cplx z : zs) {
                const cplx a = theta_additive(th, z);
                e = std::max(e, std::abs(a + theta_additive(th, -z)) / std::max(1.0, std::abs(a)));
            }
            return e;
        });
        run.run_case("theta.period_one", key, digest, cfg.residual_tol, [&] {
            double e = 0.0;
            for (cplx z : zs) {
                e = std::max(e, rel_error(theta_additive(th, z + 1.0) / theta_additive(th, z), cplx{-1.0, 0.0}));
            }
            return e;
        });
        run.run_case("theta.period_tau", key, digest, cfg.residual_tol, [&] {
            double e = 0.0;
            for (cplx z : zs) {
                const cplx expect = -std::exp(-2.0 * pi * I * z - pi * I * tau);
                e = std::max(e, rel_error(theta_additive(th, z + tau) / theta_additive(th, z), expect));
            }
            return e;
        });
        run.run_case("theta.truncation_doubling", key, digest, 1e-12, [&] {
            double e = 0.0;
            for (cplx z : zs) {
                const cplx ref = th.sum(z, 2 * th.truncation() + 1);
                e = std::max(e, std::abs(theta_additive(th, z) - ref) / std::max(1.0, std::abs(ref)));
            }
            return e;
        });
        run.run_case("theta.multiplicative_antisymmetry", key, digest, cfg.residual_tol, [&] {
            double e = 0.0;
            for (cplx z : zs) {
                const cplx x = std::exp(2.0 * pi * I * z.real());
                const cplx a = theta_multiplicative(th, x);
                e = std::max(e, std::abs(theta_multiplicative(th, 1.0 / x) + a) / std::max(1.0, std::abs(a)));
            }
            return e;
        });
        run.run_case("theta.proportionality", key, digest, 1e-9, [&] {
            const cplx c = proportionality_constant(th);
            double e = 0.0;
            for (int i = 0; i < 5; ++i) {
                const cplx z{0.45 * unit(rng), 0.5 * tau.imag() * unit(rng)};
                const cplx r = theta_multiplicative(th, std::exp(2.0 * pi * I * z)) / theta_additive(th, z);
                e = std::max(e, rel_error(r, c));
            }
            return e;
        });
        run.run_case("theta.elliptic_probe", key, digest, 1e-9, [&] {
            const cplx c1{0.21, 0.05};
            const cplx c2{-0.13, 0.11};
            EllipticPolyProbe probe;
            probe.degree = 2;
            probe.chi_one = {1.0, 0.0};
            probe.alpha = 2.0 * pi * I * (c1 + c2);
            probe.sample_points = {{0.31, 0.07}, {-0.27, -0.12}, {0.05, 0.2}};
            auto p = [&](cplx y) { return theta_additive(th, y - c1) * theta_additive(th, y - c2); };
            auto q = [&](cplx y) { return theta_additive(th, y - c1 + 1.0) * theta_additive(th, y - c2 - 1.0); };
            const std::vector<cplx> extra{{0.4, -0.05}, {-0.08, 0.13}};
            const auto rep = elliptic_poly_agreement(th, p, q, probe, extra, 1e-9);
            const auto single = elliptic_poly_probe(th, [&](cplx y) { return theta_additive(th, y); },
                                                    EllipticPolyProbe{1, {-1.0, 0.0}, {0.0, 0.0}, {{0.17, 0.02}}});
            if (!rep.consistent || !rep.agree_at_nodes) {
                return 1.0;
            }
            return std::max({rep.p.max_dev_one, rep.p.max_dev_tau, rep.max_extra_dev, single.max_dev_one,
                             single.max_dev_tau});
        });
    }
}

// ---- labels ----

inline void suite_labels(SuiteRunner &run)
{
    const Envelope &env = run.cfg().envelope;
    for_each_fm_size(env, false, [&](const DrawShape &s, const std::vector<FMLabel> &labels) {
        const std::string key = shape_key(s);
        run.run_case("labels.count", key, "-", 0.0, [&] {
            auto binom = [](int n, int k) {
                double r = 1.0;
                for (int i = 1; i <= k; ++i) {
                    r = r * (n - k + i) / i;
                }
                return r;
            };
            return std::abs(double(labels.size()) - binom(s.L2, s.k2) * binom(s.k2 + s.L1, s.k1));
        });
        for (const auto &lb : labels) {
            const std::string name = label_string(lb);
            run.run_case("labels.round_trip", name, "-", 0.0, [&] {
                return label_from_colors(lb.colors2(), lb.colors1()) == lb ? 0.0 : 1.0;
            });
            run.run_case("labels.c_L2_3", name, "-", 0.0,
                         [&] { return std::abs(double(color_count(lb, lb.L2(), 3) - (lb.L2() - lb.k2()))); });
            if (lb.L2() == 0) {
                continue;
            }
            if (lb.I2().empty() || lb.I2().back() != lb.L2()) {
                run.run_case("labels.k_transform", name, "-", 0.0, [&] {
                    const FMLabel K = k_transform(lb);
                    return induced_set(K) == induced_set(lb) ? 0.0 : 1.0;
                });
            } else {
                run.run_case("labels.j_transform", name, "-", 0.0, [&] {
                    const FMLabel J = j_transform(lb);
                    const bool ok = induced_set(J) == induced_set(lb) && J.I2hat() == lb.I2hat();
                    return ok ? 0.0 : 1.0;
                });
            }
        }
    });
}

// ---- rmatrix ----

inline void suite_rmatrix(SuiteRunner &run)
{
    const SuiteConfig &cfg = run.cfg();
    for (int rank = 2; rank <= 3; ++rank) {
        for (int draw = 0; draw < 20; ++draw) {
            const std::string key = "rank=" + std::to_string(rank);
            const ParameterDraw d = sample_parameters(cfg, draw_key("rmatrix/" + key, draw), DrawShape{0, 0, 0, 3});
            const ThetaContext th(d.tau);
            const RContext ctx = run.rcontext(rank, th);
            DynParams p{std::vector<cplx>(d.lambda.begin(), d.lambda.begin() + rank), d.gamma};
            const std::string digest = params_digest(d);
            if (draw == 0) {
                run.run_case("rmatrix.ice_rule", key, digest, 0.0, [&] {
                    double e = 0.0;
                    for (int a = 1; a <= rank; ++a) {
                        for (int b = 1; b <= rank; ++b) {
                            for (int c = 1; c <= rank; ++c) {
                                for (int f = 1; f <= rank; ++f) {
                                    if (entry_kind({a, b, c, f}) == EntryKind::forbidden) {
                                        e = std::max(e, std::abs(r_entry(ctx, d.w2[0], p, a, b, c, f)));
                                    }
                                }
                            }
                        }
                    }
                    return e;
                });
            }
            run.run_case("rmatrix.dybe", key, digest, cfg.residual_tol,
                         [&] { return dybe_residual(ctx, d.w2[0], d.w2[0] + d.w2[1], d.w2[1], p); });
            if (draw == 0) {
                run.run_case("rmatrix.dybe_degenerate", key, digest, cfg.residual_tol,
                             [&] { return dybe_residual(ctx, 0.0, d.w2[1], d.w2[1], p); });
                run.run_case("rmatrix.lambda_shift", key, digest, 0.0 + 1e-12, [&] {
                    DynParams q = p;
                    for (auto &x : q.lambda) {
                        x += d.w2[2];
                    }
                    double e = 0.0;
                    for (const auto &k : nonzero_entries(rank)) {
                        e = std::max(e, rel_error(r_entry(ctx, d.w2[0], p, k.a_in, k.b_in, k.a_out, k.b_out),
                                                  r_entry(ctx, d.w2[0], q, k.a_in, k.b_in, k.a_out, k.b_out)));
                    }
                    return e;
                });
            }
        }
    }
    {
        const ParameterDraw d = sample_parameters(cfg, "rmatrix/restriction", DrawShape{1, 0, 1, 0});
        const ThetaContext th(d.tau);
        const RContext r2 = run.rcontext(2, th);
        const RContext r3 = run.rcontext(3, th);
        run.run_case("rmatrix.restriction", "rank 3 -> 2", params_digest(d), 0.0, [&] {
            double e = 0.0;
            for (const auto &k : nonzero_entries(2)) {
                const cplx a = r_entry(r2, d.z1[0] - d.w1[0], base_params(d), k.a_in, k.b_in, k.a_out, k.b_out);
                const cplx b = r_entry(r3, d.z1[0] - d.w1[0], fm_params(d), k.a_in, k.b_in, k.a_out, k.b_out);
                e = std::max(e, std::abs(a - b));
            }
            return e;
        });
        run.run_case("rmatrix.pin_exchange_entry", "<2|<1|R|1>|2>", params_digest(d), cfg.equivalence_tol, [&] {
            const cplx z = d.z1[0] - d.w1[0];
            const cplx l12 = d.lambda[0] - d.lambda[1];
            const cplx expect = theta_additive(th, d.gamma) * theta_additive(th, z - l12) / theta_additive(th, l12);
            return rel_error(r_entry(r2, z, base_params(d), 1, 2, 2, 1), expect);
        });
    }
    // pins: initial value, column products, frozen corners, frozen upper region
    const Envelope &env = cfg.envelope;
    for_each_base_size(env, [&](int L, int k, const std::vector<BaseLabel> &labels) {
        for (int draw = 0; draw < cfg.draws; ++draw) {
            const std::string dk = draw_key("rmatrix/pins/base/" + std::to_string(L) + "," + std::to_string(k), draw);
            const ParameterDraw d = sample_parameters(cfg, dk, DrawShape{k, 0, L, 0});
            const ThetaContext th(d.tau);
            const RContext ctx = run.rcontext(2, th);
            const std::string digest = params_digest(d);
            for (const auto &lb : labels) {
                if (k == 0 || lb.positions.back() != L) {
                    continue;
                }
                const BaseLattice lat = base_lattice(d, lb);
                const std::string name = label_string(lb);
                if (k == 1) {
                    run.run_case("rmatrix.pin_initial_value", name, digest, cfg.equivalence_tol,
                                 [&] { return rel_error(brute_force_base(ctx, lat), initial_value_base(th, lat)); });
                }
                run.run_case("rmatrix.pin_column_product", name, digest, cfg.equivalence_tol, [&] {
                    double e = 0.0;
                    BaseLattice moved = lat;
                    moved.w.back() += cplx{0.173, 0.061};
                    for (int ell = 1; ell <= k; ++ell) {
                        const cplx r0 = frozen_column_factor(ctx, lat, ell) / g_ell(th, lat, ell);
                        const cplx r1 = frozen_column_factor(ctx, moved, ell) / g_ell(th, moved, ell);
                        e = std::max(e, rel_error(r0, r1));
                    }
                    return e;
                });
                run.run_case("rmatrix.pin_corner_base", name, digest, cfg.equivalence_tol,
                             [&] { return rel_error(frozen_corner_factor(ctx, lat), recursion_factor_base(th, lat)); });
            }
        }
    });
    for_each_fm_size(env, false, [&](const DrawShape &s, const std::vector<FMLabel> &labels) {
        if (s.k2 == 0) {
            return;
        }
        for (int draw = 0; draw < cfg.draws; ++draw) {
            const ParameterDraw d = sample_parameters(cfg, draw_key("rmatrix/pins/fm/" + shape_key(s), draw), s);
            const ThetaContext th(d.tau);
            const RContext ctx = run.rcontext(3, th);
            const std::string digest = params_digest(d);
            for (const auto &lb : labels) {
                if (lb.I2().back() != lb.L2()) {
                    continue;
                }
                const FMLattice lat = fm_lattice(d, lb);
                const std::string name = label_string(lb);
                run.run_case("rmatrix.pin_column_product_fm", name, digest, cfg.equivalence_tol, [&] {
                    double e = 0.0;
                    FMLattice moved = lat;
                    moved.w2.back() += cplx{0.173, 0.061};
                    for (int ell = 1; ell <= s.k2; ++ell) {
                        const cplx r0 = frozen_column_factor(ctx, lat, ell) / h_ell(th, lat, ell);
                        const cplx r1 = frozen_column_factor(ctx, moved, ell) / h_ell(th, moved, ell);
                        e = std::max(e, rel_error(r0, r1));
                    }
                    return e;
                });
                run.run_case("rmatrix.pin_corner_fm", name, digest, cfg.equivalence_tol,
                             [&] { return rel_error(frozen_corner_factor(ctx, lat), recursion_factor_fm(th, lat)); });
                if (s.k2 == 1) {
                    run.run_case("rmatrix.pin_upper_region", name, digest, cfg.equivalence_tol,
                                 [&] { return rel_error(frozen_upper_region(ctx, lat), upper_region_factor(th, lat)); });
                }
            }
        }
    });
}

// ---- thm42 / thm53 ----

inline void suite_thm42(SuiteRunner &run)
{
    const SuiteConfig &cfg = run.cfg();
    for_each_base_size(cfg.envelope, [&](int L, int k, const std::vector<BaseLabel> &labels) {
        for (int draw = 0; draw < cfg.draws; ++draw) {
            const ParameterDraw d =
                sample_parameters(cfg, draw_key("thm42/" + std::to_string(L) + "," + std::to_string(k), draw),
                                  DrawShape{k, 0, L, 0});
            const ThetaContext th(d.tau);
            const RContext ctx = run.rcontext(2, th);
            const std::string digest = params_digest(d);
            for (const auto &lb : labels) {
                const BaseLattice lat = base_lattice(d, lb);
                const std::string name = label_string(lb);
                run.run_case("thm42.equivalence", name, digest, cfg.equivalence_tol,
                             [&] { return rel_error(brute_force_base(ctx, lat), eval_E_base(th, lat)); });
                if (k >= 2) {
                    run.run_case("thm42.symmetry", name, digest, cfg.equivalence_tol, [&] {
                        BaseLattice sw = lat;
                        std::swap(sw.z[0], sw.z[1]);
                        return std::max(rel_error(brute_force_base(ctx, lat), brute_force_base(ctx, sw)),
                                        rel_error(eval_E_base(th, lat), eval_E_base(th, sw)));
                    });
                }
            }
        }
    });
}

inline void suite_thm53(SuiteRunner &run)
{
    const SuiteConfig &cfg = run.cfg();
    for_each_fm_size(cfg.envelope, false, [&](const DrawShape &s, const std::vector<FMLabel> &labels) {
        for (int draw = 0; draw < cfg.draws; ++draw) {
            const ParameterDraw d = sample_parameters(cfg, draw_key("thm53/" + shape_key(s), draw), s);
            const ThetaContext th(d.tau);
            const RContext ctx = run.rcontext(3, th);
            const std::string digest = params_digest(d);
            for (const auto &lb : labels) {
                const FMLattice lat = fm_lattice(d, lb);
                const std::string name = label_string(lb);
                run.run_case("thm53.equivalence", name, digest, cfg.equivalence_tol,
                             [&] { return rel_error(brute_force_fm(ctx, lat), eval_E_fm(th, lat)); });
                if (s.k2 >= 2) {
                    run.run_case("thm53.symmetry", name, digest, cfg.equivalence_tol, [&] {
                        FMLattice sw = lat;
                        std::swap(sw.z2[0], sw.z2[1]);
                        return std::max(rel_error(brute_force_fm(ctx, lat), brute_force_fm(ctx, sw)),
                                        rel_error(eval_E_fm(th, lat), eval_E_fm(th, sw)));
                    });
                }
            }
        }
    });
}

// ---- recursion ----

inline BaseLattice drop_last_row_and_column(const BaseLattice &lat)
{
    BaseLattice s = lat;
    s.z.pop_back();
    s.w.pop_back();
    IndexSet pos(lat.label.positions.begin(), lat.label.positions.end() - 1);
    s.label = BaseLabel(lat.label.L - 1, std::move(pos));
    return s;
}

inline BaseLattice drop_last_column(const BaseLattice &lat)
{
    BaseLattice s = lat;
    s.w.pop_back();
    s.label = BaseLabel(lat.label.L - 1, lat.label.positions);
    return s;
}

inline FMLattice j_reduced(const FMLattice &lat)
{
    FMLattice s = lat;
    const cplx zk = s.z2.back();
    s.z2.pop_back();
    s.w1.insert(s.w1.begin(), zk);
    s.w2.pop_back();
    s.label = j_transform(lat.label);
    return s;
}

inline FMLattice k_reduced(const FMLattice &lat)
{
    FMLattice s = lat;
    s.w2.pop_back();
    s.label = k_transform(lat.label);
    return s;
}

inline void suite_recursion(SuiteRunner &run)
{
    const SuiteConfig &cfg = run.cfg();
    const double tol = cfg.identity_tol;
    for_each_base_size(cfg.envelope, [&](int L, int k, const std::vector<BaseLabel> &labels) {
        for (int draw = 0; draw < cfg.draws; ++draw) {
            const ParameterDraw d =
                sample_parameters(cfg, draw_key("recursion/base/" + std::to_string(L) + "," + std::to_string(k), draw),
                                  DrawShape{k, 0, L, 0});
            const ThetaContext th(d.tau);
            const RContext ctx = run.rcontext(2, th);
            const std::string digest = params_digest(d);
            for (const auto &lb : labels) {
                const BaseLattice lat = base_lattice(d, lb);
                const std::string name = label_string(lb);
                if (k >= 1 && lb.positions.back() == L) {
                    BaseLattice at = lat;
                    at.w.back() = at.z.back() - at.params.gamma;
                    const BaseLattice smaller = drop_last_row_and_column(at);
                    run.run_case("recursion.base_specialization.brute", name, digest, tol, [&] {
                        return rel_error(brute_force_base(ctx, at),
                                         recursion_factor_base(th, at) * brute_force_base(ctx, smaller));
                    });
                    run.run_case("recursion.base_specialization.closed", name, digest, tol, [&] {
                        return rel_error(eval_E_base(th, at), recursion_factor_base(th, at) * eval_E_base(th, smaller));
                    });
                    if (k == 1) {
                        run.run_case("recursion.base_initial.brute", name, digest, tol,
                                     [&] { return rel_error(brute_force_base(ctx, lat), initial_value_base(th, lat)); });
                        run.run_case("recursion.base_initial.closed", name, digest, tol,
                                     [&] { return rel_error(eval_E_base(th, lat), initial_value_base(th, lat)); });
                    }
                } else {
                    const BaseLattice smaller = drop_last_column(lat);
                    run.run_case("recursion.base_peel.brute", name, digest, tol, [&] {
                        return rel_error(brute_force_base(ctx, lat),
                                         peel_factor_base(th, lat) * brute_force_base(ctx, smaller));
                    });
                    run.run_case("recursion.base_peel.closed", name, digest, tol, [&] {
                        return rel_error(eval_E_base(th, lat), peel_factor_base(th, lat) * eval_E_base(th, smaller));
                    });
                }
            }
        }
    });
    for_each_fm_size(cfg.envelope, false, [&](const DrawShape &s, const std::vector<FMLabel> &labels) {
        if (s.L2 == 0) {
            return;
        }
        for (int draw = 0; draw < cfg.draws; ++draw) {
            const ParameterDraw d = sample_parameters(cfg, draw_key("recursion/fm/" + shape_key(s), draw), s);
            const ThetaContext th(d.tau);
            const RContext r3 = run.rcontext(3, th);
            const RContext r2 = run.rcontext(2, th);
            const std::string digest = params_digest(d);
            for (const auto &lb : labels) {
                const FMLattice lat = fm_lattice(d, lb);
                const std::string name = label_string(lb);
                const bool colored = lb.k2() > 0 && lb.I2().back() == lb.L2();
                if (colored) {
                    FMLattice at = lat;
                    at.w2.back() = at.z2.back() - at.params.gamma;
                    const FMLattice smaller = j_reduced(at);
                    run.run_case("recursion.fm_specialization.brute", name, digest, tol, [&] {
                        return rel_error(brute_force_fm(r3, at), recursion_factor_fm(th, at) * brute_force_fm(r3, smaller));
                    });
                    run.run_case("recursion.fm_specialization.closed", name, digest, tol, [&] {
                        return rel_error(eval_E_fm(th, at), recursion_factor_fm(th, at) * eval_E_fm(th, smaller));
                    });
                    if (lb.k2() == 1) {
                        const BaseLattice base = initial_base_lattice(lat);
                        run.run_case("recursion.fm_initial.brute", name, digest, tol, [&] {
                            return rel_error(brute_force_fm(r3, lat),
                                             upper_region_factor(th, lat) * brute_force_base(r2, base));
                        });
                        run.run_case("recursion.fm_initial.closed", name, digest, tol, [&] {
                            return rel_error(eval_E_fm(th, lat), upper_region_factor(th, lat) * eval_E_base(th, base));
                        });
                    }
                } else {
                    const FMLattice smaller = k_reduced(lat);
                    run.run_case("recursion.fm_peel.brute", name, digest, tol, [&] {
                        return rel_error(brute_force_fm(r3, lat), peel_factor_fm(th, lat) * brute_force_fm(r3, smaller));
                    });
                    run.run_case("recursion.fm_peel.closed", name, digest, tol, [&] {
                        return rel_error(eval_E_fm(th, lat), peel_factor_fm(th, lat) * eval_E_fm(th, smaller));
                    });
                }
            }
        }
    });
}

// ---- qp ----

inline void suite_qp(SuiteRunner &run)
{
    const SuiteConfig &cfg = run.cfg();
    const double tol = cfg.identity_tol;
    for_each_base_size(cfg.envelope, [&](int L, int k, const std::vector<BaseLabel> &labels) {
        if (k == 0) {
            return;
        }
        for (int draw = 0; draw < cfg.draws; ++draw) {
            const ParameterDraw d =
                sample_parameters(cfg, draw_key("qp/base/" + std::to_string(L) + "," + std::to_string(k), draw),
                                  DrawShape{k, 0, L, 0});
            const ThetaContext th(d.tau);
            const RContext ctx = run.rcontext(2, th);
            const std::string digest = params_digest(d);
            for (const auto &lb : labels) {
                if (lb.positions.back() != L) {
                    continue;
                }
                const BaseLattice lat = base_lattice(d, lb);
                const std::string name = label_string(lb);
                auto shifted = [&](cplx s) {
                    BaseLattice m = lat;
                    m.w.back() += s;
                    return m;
                };
                const BaseLattice p1 = shifted(1.0);
                const BaseLattice pt = shifted(d.tau);
                const cplx e1 = expected_qp_factor(QpKind::one_shift, th, lat);
                const cplx et = expected_qp_factor(QpKind::tau_shift, th, lat);
                run.run_case("qp.base.brute", name, digest, tol, [&] {
                    const cplx w0 = brute_force_base(ctx, lat);
                    return std::max(rel_error(brute_force_base(ctx, p1) / w0, e1),
                                    rel_error(brute_force_base(ctx, pt) / w0, et));
                });
                run.run_case("qp.base.closed", name, digest, tol, [&] {
                    const cplx w0 = eval_E_base(th, lat);
                    return std::max(rel_error(eval_E_base(th, p1) / w0, e1), rel_error(eval_E_base(th, pt) / w0, et));
                });
                run.run_case("qp.base.factors", name, digest, tol, [&] {
                    double e = 0.0;
                    for (int ell = 1; ell <= k; ++ell) {
                        const cplx g0 = g_ell(th, lat, ell);
                        e = std::max({e, rel_error(g_ell(th, p1, ell) / g0, e1), rel_error(g_ell(th, pt, ell) / g0, et)});
                    }
                    auto perm = identity_perm(static_cast<std::size_t>(k));
                    do {
                        const cplx f0 = f_sigma(th, lat, perm);
                        e = std::max({e, rel_error(f_sigma(th, p1, perm) / f0, e1), rel_error(f_sigma(th, pt, perm) / f0, et)});
                    } while (std::next_permutation(perm.begin(), perm.end()));
                    return e;
                });
                run.run_case("qp.base.elliptic_uniqueness", name, digest, tol, [&] {
                    cplx sum_z{0.0, 0.0};
                    for (cplx z : lat.z) {
                        sum_z += z;
                    }
                    EllipticPolyProbe probe;
                    probe.degree = k;
                    probe.chi_one = {(k % 2 == 0) ? 1.0 : -1.0, 0.0};
                    probe.alpha = 2.0 * pi * I *
                                  (sum_z - lat.params.lambda[0] + lat.params.lambda[1] - lat.params.gamma * double(L - k));
                    for (int j = 0; j < k; ++j) {
                        probe.sample_points.push_back(lat.w.back() + cplx{0.19 * (j + 1), -0.07 * j});
                    }
                    const std::vector<cplx> extra{lat.w.back() + cplx{-0.23, 0.05}, lat.w.back() + cplx{0.41, 0.11}};
                    auto at = [&](auto eval) {
                        return [&, eval](cplx y) {
                            BaseLattice m = lat;
                            m.w.back() = y;
                            return eval(m);
                        };
                    };
                    const auto rep = elliptic_poly_agreement(
                        th, at([&](const BaseLattice &m) { return brute_force_base(ctx, m); }),
                        at([&](const BaseLattice &m) { return eval_E_base(th, m); }), probe, extra, tol);
                    if (!rep.agree_at_nodes || !rep.consistent) {
                        return std::max({1.0, rep.max_extra_dev});
                    }
                    return std::max({rep.p.max_dev_one, rep.p.max_dev_tau, rep.q.max_dev_one, rep.q.max_dev_tau,
                                     rep.max_extra_dev});
                });
            }
        }
    });
    for_each_fm_size(cfg.envelope, false, [&](const DrawShape &s, const std::vector<FMLabel> &labels) {
        if (s.k2 == 0) {
            return;
        }
        for (int draw = 0; draw < cfg.draws; ++draw) {
            const ParameterDraw d = sample_parameters(cfg, draw_key("qp/fm/" + shape_key(s), draw), s);
            const ThetaContext th(d.tau);
            const RContext ctx = run.rcontext(3, th);
            const std::string digest = params_digest(d);
            for (const auto &lb : labels) {
                if (lb.I2().back() != lb.L2()) {
                    continue;
                }
                const FMLattice lat = fm_lattice(d, lb);
                const std::string name = label_string(lb);
                auto shifted = [&](cplx sft) {
                    FMLattice m = lat;
                    m.w2.back() += sft;
                    return m;
                };
                const FMLattice p1 = shifted(1.0);
                const FMLattice pt = shifted(d.tau);
                const cplx e1 = expected_qp_factor(QpKind::one_shift, th, lat);
                const cplx et = expected_qp_factor(QpKind::tau_shift, th, lat);
                run.run_case("qp.fm.brute", name, digest, tol, [&] {
                    const cplx w0 = brute_force_fm(ctx, lat);
                    return std::max(rel_error(brute_force_fm(ctx, p1) / w0, e1), rel_error(brute_force_fm(ctx, pt) / w0, et));
                });
                run.run_case("qp.fm.closed", name, digest, tol, [&] {
                    const cplx w0 = eval_E_fm(th, lat);
                    return std::max(rel_error(eval_E_fm(th, p1) / w0, e1), rel_error(eval_E_fm(th, pt) / w0, et));
                });
                run.run_case("qp.fm.factors", name, digest, tol, [&] {
                    double e = 0.0;
                    for (int ell = 1; ell <= s.k2; ++ell) {
                        const cplx h0 = h_ell(th, lat, ell);
                        e = std::max({e, rel_error(h_ell(th, p1, ell) / h0, e1), rel_error(h_ell(th, pt, ell) / h0, et)});
                    }
                    auto perm = identity_perm(static_cast<std::size_t>(s.k2));
                    do {
                        const cplx f0 = f_sigma2(th, lat, perm);
                        e = std::max(
                            {e, rel_error(f_sigma2(th, p1, perm) / f0, e1), rel_error(f_sigma2(th, pt, perm) / f0, et)});
                    } while (std::next_permutation(perm.begin(), perm.end()));
                    return e;
                });
            }
        }
    });
}

// ---- weights ----

inline void suite_weights(SuiteRunner &run)
{
    const SuiteConfig &cfg = run.cfg();
    for_each_fm_size(cfg.envelope, true, [&](const DrawShape &s, const std::vector<FMLabel> &labels) {
        for (int draw = 0; draw < cfg.draws; ++draw) {
            const ParameterDraw d = sample_parameters(cfg, draw_key("weights/" + shape_key(s), draw), s);
            const ParameterDraw dn =
                sample_parameters(cfg, draw_key("weights/narrow/" + shape_key(s), draw), s, cfg.narrow_box);
            const ThetaContext th(d.tau);
            const ThetaContext thn(dn.tau);
            const std::string digest = params_digest(d);
            for (const auto &lb : labels) {
                const FMLattice lat = fm_lattice(d, lb);
                const std::string name = label_string(lb);
                WeightConfig wc = correspondence_map(lat);
                wc.tweak = cfg.psi_tweak;
                run.run_case("weights.correspondence", name, digest, cfg.equivalence_tol,
                             [&] { return rel_error(normalized_weight(th, wc, ThetaMode::additive), eval_E_bar(th, lat)); });
                run.run_case("weights.rescaling_route", name, digest, cfg.equivalence_tol, [&] {
                    FMLattice sh = lat;
                    for (auto &x : sh.z1) {
                        x += sh.params.gamma;
                    }
                    for (auto &x : sh.w2) {
                        x -= sh.params.gamma;
                    }
                    return rel_error(eval_E_bar(th, lat), overall_factor_62(th, lb, lat.params) * eval_E_fm(th, sh));
                });
                run.run_case("weights.normalization", name, digest, cfg.equivalence_tol, [&] {
                    const auto ps = wc.partial_sums();
                    const int lam1 = ps[1] + ps[2];
                    const cplx lhs = psi_I(th, wc, ThetaMode::additive) * weight_function(th, wc, ThetaMode::additive) /
                                     std::pow(theta_additive(th, wc.h), lam1);
                    return rel_error(lhs, normalized_weight(th, wc, ThetaMode::additive));
                });
                if (draw == 0) {
                    run.run_case("weights.counting_identities", name, "-", 0.0, [&] {
                        int bad = 0;
                        for (int a = 1; a <= lb.k2(); ++a) {
                            const auto [l, r] = counting_identity_upper(lb, wc, a);
                            bad += (l != r);
                        }
                        for (int a = 1; a <= lb.k1(); ++a) {
                            const auto [l, r] = counting_identity_lower(lb, wc, a);
                            bad += (l != r);
                        }
                        const auto ps = wc.partial_sums();
                        bad += (ps[1] != lb.k1()) + (ps[2] != lb.k2()) + (ps[3] != lb.L2());
                        bad += case_correspondence_holds(lb, wc) ? 0 : 1;
                        return double(bad);
                    });
                    run.run_case("weights.factor_count", name, "-", 0.0, [&] {
                        return std::abs(double(normalized_theta_power(wc) - (lb.k1() * lb.k2() + lb.k2() * lb.L2())));
                    });
                }
                const FMLattice latn = fm_lattice(dn, lb);
                WeightConfig wn = correspondence_map(latn);
                wn.tweak = cfg.psi_tweak;
                run.run_case("weights.multiplicative_backend", name, params_digest(dn), cfg.identity_tol, [&] {
                    const int P = lb.k1() * lb.k2() + lb.k2() * lb.L2();
                    const cplx c = proportionality_constant(thn);
                    return rel_error(normalized_weight(thn, wn, ThetaMode::multiplicative),
                                     std::pow(c, P) * normalized_weight(thn, wn, ThetaMode::additive));
                });
            }
        }
    });
}

} // namespace detail

inline const std::vector<std::string> &suite_names()
{
    static const std::vector<std::string> names{"theta", "labels", "rmatrix", "thm42", "thm53", "qp", "recursion", "weights"};
    return names;
}

/// Runs one suite ("dybe" is an alias of "rmatrix"; "all" runs every suite in order).
inline SuiteReport run_suite(const std::string &name, const SuiteConfig &cfg)
{
    const auto t0 = std::chrono::steady_clock::now();
    SuiteReport rep;
    rep.suite = name;
    rep.seed = cfg.seed;
    detail::SuiteRunner runner(cfg, rep);
    auto one = [&](const std::string &s) {
        try {
            if (s == "theta") {
                detail::suite_theta(runner);
            } else if (s == "labels") {
                detail::suite_labels(runner);
            } else if (s == "rmatrix" || s == "dybe") {
                detail::suite_rmatrix(runner);
            } else if (s == "thm42") {
                detail::suite_thm42(runner);
            } else if (s == "thm53") {
                detail::suite_thm53(runner);
            } else if (s == "qp") {
                detail::suite_qp(runner);
            } else if (s == "recursion") {
                detail::suite_recursion(runner);
            } else if (s == "weights") {
                detail::suite_weights(runner);
            } else {
                throw domain_error("unknown suite: " + s);
            }
        } catch (const conditioning_error &e) {
            rep.cases.push_back(CaseRecord{s + ".sampling", e.what(), "-", 0.0, "conditioning"});
        }
    };
    if (name == "all") {
        for (const auto &s : suite_names()) {
            one(s);
        }
    } else {
        one(name);
    }
    bool fail = false;
    bool cond = false;
    for (const auto &c : rep.cases) {
        rep.worst = std::max(rep.worst, c.max_rel_error);
        fail = fail || c.status == "fail";
        cond = cond || c.status == "conditioning";
    }
    rep.status = fail ? "fail" : (cond ? "conditioning" : "pass");
    rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

} // namespace ellfm

#endif
