#include "qsp/qsp_families.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qsp/exceptions.hpp"

namespace qsp {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

std::vector<double> sample_times(double t_max, int n) {
    n = std::max(n, 2);
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = t_max * i / (n - 1);
    return out;
}

// Ordered pairs from a coarse grid plus near-diagonal pairs, so conditions
// quantified over all s < t get probed both far apart and at t -> s+.
std::vector<std::array<double, 2>> sample_pairs(const ValidationOptions& opts) {
    const int n = std::max(opts.pair_points, 8);
    const std::vector<double> pts = sample_times(opts.t_max, n);
    std::vector<std::array<double, 2>> pairs;
    pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2 + n);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) pairs.push_back({pts[a], pts[b]});
    const double eps = std::min(1e-6, opts.t_max / (8.0 * n));
    for (int a = 0; a + 1 < n; ++a) pairs.push_back({pts[a], pts[a] + eps});
    return pairs;
}

void require_claim(const TimeFunction& f, ClaimKind kind, const std::string& who, const std::string& claim,
                   const ValidationOptions& opts) {
    const ClaimResult r = validate_claim(f, FunctionClaim{kind, opts.t_max, opts.samples});
    if (!r.ok) {
        throw ConstructionError(who + ": claim '" + claim + "' failed at t=" + fmt(r.counterexample_t) +
                                " (value " + fmt(r.value) + "): " + r.message);
    }
}

void require_range(const TimeFunction& f, double lo, double hi, const std::string& who,
                   const std::string& name, const ValidationOptions& opts) {
    for (double t : sample_times(opts.t_max, opts.samples)) {
        const double v = f(t);
        if (v < lo - opts.slack || v > hi + opts.slack) {
            throw ConstructionError(who + ": " + name + "=" + fmt(v) + " at s=" + fmt(t) +
                                    " outside [" + fmt(lo) + "," + fmt(hi) + "]");
        }
    }
}

// Sampled sanity sweep: evaluated matrices must satisfy the declared kind.
void require_kind_on_pairs(const std::string& who, const std::function<CubicMatrix(double, double)>& eval,
                           StochKind kind, const ValidationOptions& opts, double tol = 1e-9) {
    for (const auto& [s, t] : sample_pairs(opts)) {
        const StochResult r = is_stochastic(eval(s, t), kind, tol);
        if (!r.ok) {
            throw ConstructionError(who + ": evaluated matrix is not " + kind_name(kind) +
                                    "-stochastic at (s,t)=(" + fmt(s) + "," + fmt(t) + "), worst sum deviation " +
                                    fmt(r.max_sum_deviation) + ", min entry " + fmt(r.min_entry));
        }
    }
}

}  // namespace

CubicProcessFamily::CubicProcessFamily(FamilyDescriptor desc, StochKind kind, ProductKind product,
                                       std::optional<BinaryOpTable> op, double horizon,
                                       std::function<CubicMatrix(double, double)> eval)
    : desc_(std::move(desc)),
      kind_(kind),
      product_(product),
      op_(std::move(op)),
      horizon_(horizon),
      eval_(std::move(eval)) {
    if (!is_cubic_kind(kind_)) throw std::invalid_argument("CubicProcessFamily: kind must be cubic");
    if (!(horizon_ > 0.0)) throw std::invalid_argument("CubicProcessFamily: horizon must be positive");
    if (product_ == ProductKind::MaksimovA && !op_) {
        throw std::invalid_argument("CubicProcessFamily: MaksimovA product needs an operation table");
    }
    if (!eval_) throw std::invalid_argument("CubicProcessFamily: missing evaluator");
}

const BinaryOpTable& CubicProcessFamily::op_table() const {
    if (!op_) throw std::logic_error("CubicProcessFamily: no operation table (0-product family)");
    return *op_;
}

CubicMatrix CubicProcessFamily::operator()(double s, double t) const {
    if (!(s >= 0.0) || !(s < t)) {
        throw std::domain_error(desc_.name + ": needs 0 <= s < t, got s=" + std::to_string(s) +
                                ", t=" + std::to_string(t));
    }
    if (t > horizon_ * (1.0 + 1e-12) + 1e-12) {
        throw std::domain_error(desc_.name + ": t=" + std::to_string(t) + " beyond horizon " +
                                std::to_string(horizon_));
    }
    return eval_(s, t);
}

CubicMatrix CubicProcessFamily::apply_product(const CubicMatrix& a, const CubicMatrix& b) const {
    if (product_ == ProductKind::Maksimov0) return mul_maksimov0(a, b);
    return mul_maksimov_a(a, b, *op_);
}

MatrixFlow::MatrixFlow(FamilyDescriptor desc, double horizon, std::function<SquareMatrix(double)> eval,
                       const ValidationOptions& opts, double det_floor)
    : desc_(std::move(desc)), horizon_(horizon), det_floor_(det_floor), eval_(std::move(eval)) {
    if (!(horizon_ > 0.0)) throw std::invalid_argument("MatrixFlow: horizon must be positive");
    if (!eval_) throw std::invalid_argument("MatrixFlow: missing evaluator");
    for (double t : sample_times(horizon_, opts.samples)) {
        const double det = determinant(eval_(t));
        if (std::abs(det) <= det_floor_) {
            throw ConstructionError(desc_.name + ": flow is singular at t=" + fmt(t) +
                                    " (|det|=" + fmt(std::abs(det)) + " <= " + fmt(det_floor_) + ")");
        }
    }
}

SquareMatrix MatrixFlow::at(double t) const {
    if (t < 0.0 || t > horizon_ * (1.0 + 1e-12) + 1e-12) {
        throw std::domain_error(desc_.name + ": t=" + std::to_string(t) + " outside [0, horizon]");
    }
    return eval_(t);
}

SquareMatrix MatrixFlow::inverse_at(double t) const { return inverse(at(t), det_floor_); }

CubicProcessFamily direct_sum_30(const std::vector<SquareProcessFamily>& layers,
                                 const ValidationOptions& opts) {
    if (layers.empty()) throw ConstructionError("direct_sum_30: no layers");
    const int m = layers[0].dim();
    if (static_cast<int>(layers.size()) != m) {
        throw ConstructionError("direct_sum_30: need exactly m=" + std::to_string(m) + " layers of dimension " +
                                std::to_string(m) + ", got " + std::to_string(layers.size()));
    }
    FamilyDescriptor desc{"direct_sum", m, {}, {}, {}};
    double horizon = layers[0].horizon();
    std::vector<double> cutoffs;
    for (int j = 0; j < m; ++j) {
        const SquareProcessFamily& layer = layers[j];
        if (layer.dim() != m) throw ConstructionError("direct_sum_30: layer dimension mismatch");
        if (!layer.declares(StochKind::Right)) {
            throw ConstructionError("direct_sum_30: layer " + std::to_string(j) + " (" +
                                    layer.descriptor().name + ") is not right stochastic");
        }
        horizon = std::min(horizon, layer.horizon());
        const auto& lc = layer.descriptor().cutoffs;
        cutoffs.insert(cutoffs.end(), lc.begin(), lc.end());
        desc.params["layer" + std::to_string(j)] = layer.descriptor().name;
    }
    const TimeGrid check_grid = TimeGrid::uniform_with(std::min(horizon, opts.t_max), 12, cutoffs);
    for (int j = 0; j < m; ++j) {
        const VerificationReport r = kce_residual_square(layers[j], check_grid, 1e-9);
        if (!r.pass()) {
            throw ConstructionError("direct_sum_30: layer " + std::to_string(j) +
                                    " fails the square Kolmogorov-Chapman check, max residual " +
                                    fmt(r.max_residual) + " at (s,tau,t)=(" + fmt(r.worst.s) + "," +
                                    fmt(r.worst.tau) + "," + fmt(r.worst.t) + ")");
        }
    }
    desc.cutoffs = cutoffs;
    std::vector<SquareProcessFamily> owned(layers);
    return CubicProcessFamily(std::move(desc), StochKind::Three, ProductKind::Maksimov0, std::nullopt, horizon,
                              [owned](double s, double t) {
                                  std::vector<SquareMatrix> slices;
                                  slices.reserve(owned.size());
                                  for (const auto& layer : owned) slices.push_back(layer(s, t));
                                  return stack_second(slices);
                              });
}

CubicProcessFamily m1_family(const M1Params& params, const ValidationOptions& opts) {
    require_claim(params.g, ClaimKind::InUnitInterval, "m1", "g in [0,1]", opts);
    for (double s : sample_times(opts.t_max, opts.samples)) {
        const double g = params.g(s), u11 = params.u11(s), u21 = params.u21(s);
        if (u11 < -opts.slack || u11 > g + opts.slack) {
            throw ConstructionError("m1: condition 0 <= u11 <= g violated at s=" + fmt(s) + " (u11=" +
                                    fmt(u11) + ", g=" + fmt(g) + ")");
        }
        if (u21 < -opts.slack || u21 > 1.0 - g + opts.slack) {
            throw ConstructionError("m1: condition 0 <= u21 <= 1-g violated at s=" + fmt(s) + " (u21=" +
                                    fmt(u21) + ", 1-g=" + fmt(1.0 - g) + ")");
        }
    }
    FamilyDescriptor desc{"m1",
                          2,
                          {{"g", params.g.to_string()}, {"u11", params.u11.to_string()}, {"u21", params.u21.to_string()}},
                          {},
                          {}};
    auto g = params.g;
    auto u11 = params.u11;
    auto u21 = params.u21;
    auto eval = [g, u11, u21](double s, double) {
        const double gs = g(s), a = u11(s), b = u21(s);
        return CubicMatrix(2, {a, a, gs - a, gs - a, b, b, 1.0 - gs - b, 1.0 - gs - b});
    };
    return CubicProcessFamily(std::move(desc), StochKind::OneTwo, ProductKind::MaksimovA,
                              BinaryOpTable::left_projection(2), opts.t_max, eval);
}

CubicProcessFamily m2_family(const M2Params& params, const ValidationOptions& opts) {
    require_claim(params.psi, ClaimKind::Positive, "m2", "psi positive", opts);
    require_claim(params.psi, ClaimKind::Decreasing, "m2", "psi decreasing", opts);
    require_claim(params.zeta11, ClaimKind::InUnitInterval, "m2", "zeta11 in [0,1]", opts);
    require_claim(params.zeta21, ClaimKind::InUnitInterval, "m2", "zeta21 in [0,1]", opts);
    for (const auto& [s, t] : sample_pairs(opts)) {
        const double inv_s = 1.0 / params.psi(s);
        const double inv_t = 1.0 / params.psi(t);
        const double g11 = params.gamma11(s);
        const double g21 = params.gamma21(s);
        if (g11 < 0.5 * (inv_s - inv_t) - opts.slack || g11 > 0.5 * (inv_s + inv_t) + opts.slack) {
            throw ConstructionError("m2: gamma11 band violated at (s,t)=(" + fmt(s) + "," + fmt(t) +
                                    "): gamma11=" + fmt(g11) + " not in [" + fmt(0.5 * (inv_s - inv_t)) + "," +
                                    fmt(0.5 * (inv_s + inv_t)) + "]");
        }
        if (g21 < -0.5 * (inv_s + inv_t) - opts.slack || g21 > 0.5 * (inv_s - inv_t) + opts.slack) {
            throw ConstructionError("m2: gamma21 band violated at (s,t)=(" + fmt(s) + "," + fmt(t) +
                                    "): gamma21=" + fmt(g21) + " not in [" + fmt(-0.5 * (inv_s + inv_t)) + "," +
                                    fmt(0.5 * (inv_s - inv_t)) + "]");
        }
    }
    FamilyDescriptor desc{"m2",
                          2,
                          {{"psi", params.psi.to_string()},
                           {"zeta11", params.zeta11.to_string()},
                           {"zeta21", params.zeta21.to_string()},
                           {"gamma11", params.gamma11.to_string()},
                           {"gamma21", params.gamma21.to_string()}},
                          {},
                          {}};
    if (params.psi_limit) desc.params["psi_limit"] = fmt(*params.psi_limit);
    const M2Params p = params;
    auto eval = [p](double s, double t) {
        const double psi_t = p.psi(t);
        const double inv_s = 1.0 / p.psi(s);
        const double z11 = p.zeta11(s), z21 = p.zeta21(s);
        const double g11 = p.gamma11(s), g21 = p.gamma21(s);
        return CubicMatrix(2, {
                                  0.5 * (z11 + g11 * psi_t),
                                  0.5 * (z11 - g11 * psi_t),
                                  0.5 * (1.0 - z11 + (inv_s - g11) * psi_t),
                                  0.5 * (1.0 - z11 - (inv_s - g11) * psi_t),
                                  0.5 * (z21 + g21 * psi_t),
                                  0.5 * (z21 - g21 * psi_t),
                                  0.5 * (1.0 - z21 - (inv_s + g21) * psi_t),
                                  0.5 * (1.0 - z21 + (g21 + inv_s) * psi_t),
                              });
    };
    require_kind_on_pairs("m2", eval, StochKind::OneTwo, opts);
    return CubicProcessFamily(std::move(desc), StochKind::OneTwo, ProductKind::MaksimovA,
                              BinaryOpTable::left_projection(2), opts.t_max, eval);
}

CubicProcessFamily m3_family(const M3Params& params, const ValidationOptions& opts) {
    if (!(params.cutoff > 0.0)) throw ConstructionError("m3: cutoff must be positive, got " + fmt(params.cutoff));
    require_claim(params.eta11, ClaimKind::InUnitInterval, "m3", "eta11 in [0,1]", opts);
    require_claim(params.xi21, ClaimKind::InUnitInterval, "m3", "xi21 in [0,1]", opts);
    require_range(params.kappa11, 0.0, 0.5, "m3", "kappa11", opts);
    require_range(params.kappa21, 0.0, 0.5, "m3", "kappa21", opts);

    FamilyDescriptor desc{"m3",
                          2,
                          {{"eta11", params.eta11.to_string()},
                           {"xi21", params.xi21.to_string()},
                           {"kappa11", params.kappa11.to_string()},
                           {"kappa21", params.kappa21.to_string()},
                           {"b", fmt(params.cutoff)}},
                          {params.cutoff},
                          {}};
    double worst_gap = 0.0, worst_s = 0.0;
    for (double s : sample_times(std::min(opts.t_max, params.cutoff), opts.samples)) {
        const double gap = std::max(std::abs(params.kappa11(s) - 0.5 * params.eta11(s)),
                                    std::abs(params.kappa21(s) - 0.5 * params.xi21(s)));
        if (gap > worst_gap) {
            worst_gap = gap;
            worst_s = s;
        }
    }
    if (worst_gap > 1e-9) {
        desc.warnings.push_back("m3: branches are not coupled (kappa11 != eta11/2 or kappa21 != xi21/2, gap " +
                                fmt(worst_gap) + " at s=" + fmt(worst_s) +
                                "); triples straddling the cutoff will not satisfy the Kolmogorov-Chapman equation");
    }
    const M3Params p = params;
    auto eval = [p](double s, double t) {
        if (t < p.cutoff) {
            const double e = p.eta11(s), x = p.xi21(s);
            return CubicMatrix(2, {e, 0.0, 1.0 - e, 0.0, 0.0, x, 0.0, 1.0 - x});
        }
        const double k1 = p.kappa11(s), k2 = p.kappa21(s);
        return CubicMatrix(2, {k1, k1, 0.5 - k1, 0.5 - k1, k2, k2, 0.5 - k2, 0.5 - k2});
    };
    return CubicProcessFamily(std::move(desc), StochKind::OneTwo, ProductKind::MaksimovA,
                              BinaryOpTable::left_projection(2), opts.t_max, eval);
}

MatrixFlow p3_flow(const TimeFunction& a, const TimeFunction& b, const ValidationOptions& opts) {
    for (double t : sample_times(opts.t_max, opts.samples)) {
        const double av = a(t), bv = b(t);
        if (!(av > 0.0 && av < 1.0) || !(bv > 0.0 && bv < 1.0)) {
            throw ConstructionError("p3_flow: a,b must lie in (0,1); at t=" + fmt(t) + " got a=" + fmt(av) +
                                    ", b=" + fmt(bv));
        }
    }
    const FunctionClaim inc{ClaimKind::Increasing, opts.t_max, opts.samples};
    const FunctionClaim dec{ClaimKind::Decreasing, opts.t_max, opts.samples};
    const bool both_inc = validate_claim(a, inc).ok && validate_claim(b, inc).ok;
    const bool both_dec = validate_claim(a, dec).ok && validate_claim(b, dec).ok;
    double min_sum = 2.0, max_sum = 0.0, min_at = 0.0, max_at = 0.0;
    for (double t : sample_times(opts.t_max, opts.samples)) {
        const double sum = a(t) + b(t);
        if (sum < min_sum) {
            min_sum = sum;
            min_at = t;
        }
        if (sum > max_sum) {
            max_sum = sum;
            max_at = t;
        }
    }
    const bool branch_inc = both_inc && min_sum > 1.0;
    const bool branch_dec = both_dec && max_sum < 1.0;
    if (!branch_inc && !branch_dec) {
        throw ConstructionError("p3_flow: need both functions increasing with a+b > 1 or both decreasing "
                                "with a+b < 1; sampled a+b in [" + fmt(min_sum) + " at t=" + fmt(min_at) +
                                ", " + fmt(max_sum) + " at t=" + fmt(max_at) + "]");
    }
    FamilyDescriptor desc{"p3_flow", 2, {{"a", a.to_string()}, {"b", b.to_string()}}, {}, {}};
    auto av = a;
    auto bv = b;
    return MatrixFlow(std::move(desc), opts.t_max,
                      [av, bv](double t) {
                          const double at = av(t), bt = bv(t);
                          return SquareMatrix(2, {at, 1.0 - bt, 1.0 - at, bt});
                      },
                      opts);
}

BetaProvider equal_split_beta(const MatrixFlow& flow) {
    const int m = flow.dim();
    return [flow, m](double s) {
        const SquareMatrix a = flow.at(s);
        std::vector<double> e(static_cast<std::size_t>(m) * m * m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                for (int k = 0; k < m; ++k)
                    e[(static_cast<std::size_t>(i) * m + j) * m + k] = a(i, k) / m;
        return CubicMatrix(m, std::move(e));
    };
}

BetaProvider beta_from_n_params(const NParams& params) {
    const NParams p = params;
    return [p](double s) {
        const double as = p.a(s), bs = p.b(s);
        const double al = p.alpha(s), be = p.beta(s), ga = p.gamma(s), de = p.delta(s);
        return CubicMatrix(2, {al, be, as - al, 1.0 - bs - be, ga, de, 1.0 - as - ga, bs - de});
    };
}

CubicProcessFamily theorem_a_family(const MatrixFlow& flow, const BetaProvider& beta,
                                    const ValidationOptions& opts) {
    const int m = flow.dim();
    const double horizon = std::min(flow.horizon(), opts.t_max);
    const ValidationOptions local{horizon, opts.samples, opts.pair_points, opts.slack};

    // (i): the contracted flow must be left stochastic at every sampled pair.
    for (const auto& [s, t] : sample_pairs(local)) {
        const SquareMatrix prod = multiply(flow.at(s), flow.inverse_at(t));
        const StochResult r = is_square_stochastic(prod, StochKind::Left, 1e-9);
        if (!r.ok) {
            throw ConstructionError("theorem_a: condition (i) fails, A^[s](A^[t])^-1 is not left stochastic "
                                    "at (s,t)=(" + fmt(s) + "," + fmt(t) + "), worst sum deviation " +
                                    fmt(r.max_sum_deviation) + ", min entry " + fmt(r.min_entry));
        }
    }
    // (ii a): the beta split must sum back to the flow rows.
    for (double s : sample_times(horizon, std::max(16, local.pair_points))) {
        const CubicMatrix bm = beta(s);
        if (bm.dim() != m) throw ConstructionError("theorem_a: beta matrix dimension mismatch");
        const SquareMatrix a = flow.at(s);
        for (int i = 0; i < m; ++i)
            for (int k = 0; k < m; ++k) {
                double sum = 0.0;
                for (int j = 0; j < m; ++j) sum += bm(i, j, k);
                if (std::abs(sum - a(i, k)) > 1e-9) {
                    throw ConstructionError("theorem_a: condition (ii) fails, sum_j beta_" + std::to_string(i) +
                                            "j" + std::to_string(k) + "(s) = " + fmt(sum) + " != a_ik = " +
                                            fmt(a(i, k)) + " at s=" + fmt(s));
                }
            }
    }
    auto eval = [flow, beta, m](double s, double t) {
        const CubicMatrix bm = beta(s);
        const SquareMatrix binv = flow.inverse_at(t);
        std::vector<double> e(static_cast<std::size_t>(m) * m * m, 0.0);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                for (int r = 0; r < m; ++r) {
                    double sum = 0.0;
                    for (int k = 0; k < m; ++k) sum += bm(i, j, k) * binv(k, r);
                    e[(static_cast<std::size_t>(i) * m + j) * m + r] = sum;
                }
        return CubicMatrix(m, std::move(e));
    };
    // (ii b): assembled entries must be nonnegative at sampled pairs.
    for (const auto& [s, t] : sample_pairs(local)) {
        const CubicMatrix p = eval(s, t);
        for (double v : p.entries()) {
            if (v < -1e-12) {
                throw ConstructionError("theorem_a: condition (ii) fails, entry " + fmt(v) +
                                        " below -1e-12 at (s,t)=(" + fmt(s) + "," + fmt(t) + ")");
            }
        }
    }
    FamilyDescriptor desc{"theorem_a", m, flow.descriptor().params, flow.descriptor().cutoffs, {}};
    return CubicProcessFamily(std::move(desc), StochKind::OneTwo, ProductKind::MaksimovA,
                              BinaryOpTable::left_projection(m), horizon, eval);
}

CubicProcessFamily theorem_a_family(const MatrixFlow& flow, const ValidationOptions& opts) {
    return theorem_a_family(flow, equal_split_beta(flow), opts);
}

CubicProcessFamily n_family(const NParams& params, const ValidationOptions& opts) {
    for (double t : sample_times(opts.t_max, opts.samples)) {
        const double at = params.a(t), bt = params.b(t);
        if (!(at > 0.0 && at < 1.0) || !(bt > 0.0 && bt < 1.0) || !(at + bt - 1.0 > 0.0)) {
            throw ConstructionError("n_family: needs a,b in (0,1) with a+b-1 > 0; at t=" + fmt(t) +
                                    " got a=" + fmt(at) + ", b=" + fmt(bt));
        }
    }
    for (double s : sample_times(opts.t_max, opts.samples)) {
        const double as = params.a(s), bs = params.b(s);
        const double al = params.alpha(s), be = params.beta(s), ga = params.gamma(s), de = params.delta(s);
        if (al < -opts.slack || al > as + opts.slack) {
            throw ConstructionError("n_family: condition 0 <= alpha <= a violated at s=" + fmt(s) +
                                    " (alpha=" + fmt(al) + ", a=" + fmt(as) + ")");
        }
        if (be < -opts.slack || be > 1.0 - bs + opts.slack) {
            throw ConstructionError("n_family: condition 0 <= beta <= 1-b violated at s=" + fmt(s) +
                                    " (beta=" + fmt(be) + ", 1-b=" + fmt(1.0 - bs) + ")");
        }
        if (ga < -opts.slack || ga > 1.0 - as + opts.slack) {
            throw ConstructionError("n_family: condition 0 <= gamma <= 1-a violated at s=" + fmt(s) +
                                    " (gamma=" + fmt(ga) + ", 1-a=" + fmt(1.0 - as) + ")");
        }
        if (de < -opts.slack || de > bs + opts.slack) {
            throw ConstructionError("n_family: condition 0 <= delta <= b violated at s=" + fmt(s) +
                                    " (delta=" + fmt(de) + ", b=" + fmt(bs) + ")");
        }
    }
    FamilyDescriptor desc{"n",
                          2,
                          {{"a", params.a.to_string()},
                           {"b", params.b.to_string()},
                           {"alpha", params.alpha.to_string()},
                           {"beta", params.beta.to_string()},
                           {"gamma", params.gamma.to_string()},
                           {"delta", params.delta.to_string()}},
                          {},
                          {}};
    const NParams p = params;
    auto eval = [p](double s, double t) {
        const double at = p.a(t), bt = p.b(t);
        const double d = at + bt - 1.0;
        const double as = p.a(s), bs = p.b(s);
        const double al = p.alpha(s), be = p.beta(s), ga = p.gamma(s), de = p.delta(s);
        return CubicMatrix(2, {
                                  (al * bt + be * (at - 1.0)) / d,
                                  (al * (bt - 1.0) + be * at) / d,
                                  ((as - al) * bt + (1.0 - bs - be) * (at - 1.0)) / d,
                                  ((as - al) * (bt - 1.0) + (1.0 - bs - be) * at) / d,
                                  (ga * bt + de * (at - 1.0)) / d,
                                  (ga * (bt - 1.0) + de * at) / d,
                                  ((1.0 - as - ga) * bt + (bs - de) * (at - 1.0)) / d,
                                  ((1.0 - as - ga) * (bt - 1.0) + (bs - de) * at) / d,
                              });
    };
    require_kind_on_pairs("n_family", eval, StochKind::OneTwo, opts);
    return CubicProcessFamily(std::move(desc), StochKind::OneTwo, ProductKind::MaksimovA,
                              BinaryOpTable::left_projection(2), opts.t_max, eval);
}

VerificationReport kce_residual_cubic(const CubicProcessFamily& family, const TimeGrid& grid, double tol) {
    if (grid.t_max() > family.horizon() * (1.0 + 1e-12)) {
        throw std::domain_error("kce_residual_cubic: grid exceeds family horizon");
    }
    VerificationReport report;
    report.check = "kce_cubic[" + family.descriptor().name + "]";
    report.tol = tol;
    for (const auto& [s, tau, t] : grid.triples()) {
        const CubicMatrix lhs = family(s, t);
        const CubicMatrix rhs = family.apply_product(family(s, tau), family(tau, t));
        report.record({s, tau, t, max_abs_diff(lhs, rhs)});
    }
    return report;
}

namespace {

std::vector<double> spacing_set(const TimeGrid& grid) {
    std::vector<double> out;
    const auto& p = grid.points();
    for (std::size_t i = 1; i < p.size(); ++i) out.push_back(p[i] - p[i - 1]);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              out.end());
    return out;
}

}  // namespace

TimeDependence classify_time_dependence(const CubicProcessFamily& family, const TimeGrid& grid,
                                        const std::vector<double>& candidate_periods, double tol) {
    const double horizon = family.horizon() * (1.0 + 1e-12);
    const auto pairs = grid.pairs();
    const std::vector<double> spacings = spacing_set(grid);

    // Homogeneity: M^[s,t] == M^[s+h, t+h] for every grid shift h.
    {
        std::size_t compared = 0;
        bool ok = true;
        for (const auto& [s, t] : pairs) {
            for (double h : spacings) {
                if (t + h > horizon) continue;
                if (max_abs_diff(family(s, t), family(s + h, t + h)) > tol) {
                    ok = false;
                    break;
                }
                ++compared;
            }
            if (!ok) break;
        }
        if (ok && compared >= 3) return {TimeDependenceKind::Homogeneous, 0.0, compared};
    }

    const std::vector<double>& candidates = candidate_periods.empty() ? spacings : candidate_periods;

    for (double period : candidates) {
        if (!(period > 0.0)) continue;
        std::size_t compared = 0;
        bool ok = true;
        for (const auto& [s, t] : pairs) {
            if (t + period > horizon) continue;
            if (max_abs_diff(family(s, t), family(s, t + period)) > tol) {
                ok = false;
                break;
            }
            ++compared;
        }
        if (ok && compared >= 3) return {TimeDependenceKind::PeriodicInT, period, compared};
    }

    for (double period : candidates) {
        if (!(period > 0.0)) continue;
        std::size_t compared = 0;
        bool ok = true;
        for (const auto& [s, t] : pairs) {
            if (!(s + period < t)) continue;
            if (max_abs_diff(family(s, t), family(s + period, t)) > tol) {
                ok = false;
                break;
            }
            ++compared;
        }
        if (ok && compared >= 3) return {TimeDependenceKind::PeriodicInS, period, compared};
    }

    return {TimeDependenceKind::General, 0.0, 0};
}

}  // namespace qsp
