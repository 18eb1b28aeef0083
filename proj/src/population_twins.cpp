#include "qsp/population_twins.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qsp/exceptions.hpp"
#include "qsp/stoch.hpp"

namespace qsp {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

std::vector<double> sample_times(double lo, double hi, int n, bool include_hi) {
    n = std::max(n, 2);
    std::vector<double> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double f = include_hi ? static_cast<double>(i) / (n - 1) : static_cast<double>(i) / n;
        out.push_back(lo + (hi - lo) * f);
    }
    return out;
}

// Middle-layer slots of a twin-model matrix.
struct MiddleLayer {
    double a, b, c, alpha, beta, gamma, u, v, w;
};

MiddleLayer middle_of(const CubicMatrix& q) {
    return {q(0, 0, 1), q(0, 1, 1), q(0, 2, 1), q(1, 0, 1), q(1, 1, 1),
            q(1, 2, 1), q(2, 0, 1), q(2, 1, 1), q(2, 2, 1)};
}

CubicMatrix twin_matrix(const MiddleLayer& mid) {
    std::vector<double> e(27, 0.0);
    auto set = [&e](int i, int j, int k, double v) { e[(static_cast<std::size_t>(i) * 3 + j) * 3 + k] = v; };
    set(0, 0, 0, 1.0);
    set(0, 0, 2, 1.0);
    set(0, 0, 1, mid.a);
    set(0, 1, 1, mid.b);
    set(0, 2, 1, mid.c);
    set(1, 0, 1, mid.alpha);
    set(1, 1, 1, mid.beta);
    set(1, 2, 1, mid.gamma);
    set(2, 0, 1, mid.u);
    set(2, 1, 1, mid.v);
    set(2, 2, 1, mid.w);
    return CubicMatrix(3, std::move(e));
}

void require_pattern(const CubicMatrix& q, const char* who) {
    if (q.dim() != 3) throw std::domain_error(std::string(who) + ": twin model needs m=3");
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; k += 2) {
                const double want = (i == 0 && j == 0) ? 1.0 : 0.0;
                if (std::abs(q(i, j, k) - want) > 1e-12) {
                    throw std::domain_error(std::string(who) + ": matrix lacks the twin-model sparsity pattern at (" +
                                            std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) +
                                            ")");
                }
            }
}

void require_nonneg(const TimeFunction& f, const char* name, double t_max, int samples, double slack) {
    for (double t : sample_times(0.0, t_max, samples, true)) {
        const double v = f(t);
        if (v < -slack) {
            throw ConstructionError(std::string("twin_b: ") + name + "=" + fmt(v) + " negative at s=" + fmt(t));
        }
    }
}

}  // namespace

TwinFamily case_a_family(const ValidationOptions& opts) {
    FamilyDescriptor desc{"twin_a", 3, {}, {}, {}};
    const CubicMatrix constant = twin_matrix({1.0, 0, 0, 0, 0, 0, 0, 0, 0});
    CubicProcessFamily family(std::move(desc), StochKind::OneTwo, ProductKind::MaksimovA,
                              BinaryOpTable::left_projection(3), opts.t_max,
                              [constant](double, double) { return constant; });
    return {TwinBranch::ExtinctionA, std::move(family), std::nullopt, std::nullopt};
}

TwinFamily case_b_family(const TwinBParams& params, TwinConditionMode mode, const ValidationOptions& opts) {
    const ClaimResult pos = validate_claim(params.phi, FunctionClaim{ClaimKind::Positive, opts.t_max, opts.samples});
    if (!pos.ok) {
        throw ConstructionError("twin_b: phi must stay positive, failed at t=" + fmt(pos.counterexample_t) +
                                " (value " + fmt(pos.value) + ")");
    }
    require_nonneg(params.b, "b", opts.t_max, opts.samples, opts.slack);
    require_nonneg(params.c, "c", opts.t_max, opts.samples, opts.slack);
    require_nonneg(params.u, "u", opts.t_max, opts.samples, opts.slack);
    require_nonneg(params.v, "v", opts.t_max, opts.samples, opts.slack);
    require_nonneg(params.w, "w", opts.t_max, opts.samples, opts.slack);
    require_nonneg(params.alpha, "alpha", opts.t_max, opts.samples, opts.slack);
    require_nonneg(params.beta, "beta", opts.t_max, opts.samples, opts.slack);

    auto births = [&params](double s) {
        return params.b(s) + params.c(s) + params.u(s) + params.v(s) + params.w(s);
    };

    // alpha(t) + beta(t) <= 1/phi(t) keeps the derived gamma nonnegative.
    for (double t : sample_times(0.0, opts.t_max, opts.samples, true)) {
        const double bound = 1.0 / params.phi(t);
        const double got = params.alpha(t) + params.beta(t);
        if (got > bound + opts.slack) {
            throw ConstructionError("twin_b: condition alpha+beta <= 1/phi violated at t=" + fmt(t) +
                                    " (alpha+beta=" + fmt(got) + ", 1/phi=" + fmt(bound) + ")");
        }
    }
    // Pair condition on the configured grid: 1/phi(t) - 1/phi(s) >= b+c+u+v+w(s).
    const std::vector<double> pts = sample_times(0.0, opts.t_max, std::max(opts.pair_points, 8), true);
    double worst_gap = 0.0, worst_s = 0.0, worst_t = 0.0;
    for (std::size_t a = 0; a < pts.size(); ++a)
        for (std::size_t b = a + 1; b < pts.size(); ++b) {
            const double lhs = 1.0 / params.phi(pts[b]) - 1.0 / params.phi(pts[a]);
            const double rhs = births(pts[a]);
            if (rhs - lhs > worst_gap) {
                worst_gap = rhs - lhs;
                worst_s = pts[a];
                worst_t = pts[b];
            }
        }
    if (worst_gap > opts.slack) {
        throw ConstructionError("twin_b: condition 1/phi(t) - 1/phi(s) >= b+c+u+v+w(s) violated at (s,t)=(" +
                                fmt(worst_s) + "," + fmt(worst_t) + ") by " + fmt(worst_gap));
    }

    FamilyDescriptor desc{"twin_b",
                          3,
                          {{"phi", params.phi.to_string()},
                           {"b", params.b.to_string()},
                           {"c", params.c.to_string()},
                           {"u", params.u.to_string()},
                           {"v", params.v.to_string()},
                           {"w", params.w.to_string()},
                           {"alpha", params.alpha.to_string()},
                           {"beta", params.beta.to_string()}},
                          {},
                          {}};
    if (params.phi_limit) desc.params["phi_limit"] = fmt(*params.phi_limit);

    // Nonzero single-birth mass cannot satisfy the pair condition for t
    // arbitrarily close to s when 1/phi is continuous; the grid mode records
    // this instead of silently zeroing the functions.
    double max_births = 0.0, max_births_at = 0.0;
    for (double s : sample_times(0.0, opts.t_max, opts.samples, true)) {
        const double bsum = births(s);
        if (bsum > max_births) {
            max_births = bsum;
            max_births_at = s;
        }
    }
    if (max_births > opts.slack) {
        const std::string note = "twin_b: b+c+u+v+w=" + fmt(max_births) + " at s=" + fmt(max_births_at) +
                                 "; the pair condition fails in the t->s limit, satisfied on the sampled grid only";
        if (mode == TwinConditionMode::Strict) {
            throw ConstructionError(note + " (strict mode)");
        }
        desc.warnings.push_back(note);
    }

    const TwinBParams p = params;
    auto eval = [p](double s, double t) {
        const double phi_t = p.phi(t);
        const double inv_s = 1.0 / p.phi(s);
        const double births_s = p.b(s) + p.c(s) + p.u(s) + p.v(s) + p.w(s);
        MiddleLayer mid;
        mid.a = 1.0 - phi_t * (inv_s + births_s);
        mid.b = p.b(s) * phi_t;
        mid.c = p.c(s) * phi_t;
        mid.alpha = p.alpha(s) * phi_t;
        mid.beta = p.beta(s) * phi_t;
        mid.gamma = (inv_s - p.alpha(s) - p.beta(s)) * phi_t;
        mid.u = p.u(s) * phi_t;
        mid.v = p.v(s) * phi_t;
        mid.w = p.w(s) * phi_t;
        return twin_matrix(mid);
    };
    CubicProcessFamily family(std::move(desc), StochKind::OneTwo, ProductKind::MaksimovA,
                              BinaryOpTable::left_projection(3), opts.t_max, eval);
    return {TwinBranch::SurvivalB, std::move(family), params, std::nullopt};
}

TwinFamily case_c_family(const TwinCParams& params, const ValidationOptions& opts) {
    if (!(params.cutoff > 0.0)) {
        throw ConstructionError("twin_c: cutoff must be positive, got " + fmt(params.cutoff));
    }
    const double hi = std::min(params.cutoff, opts.t_max);
    for (double s : sample_times(0.0, hi, opts.samples, false)) {
        const double a0 = params.alpha0(s), b0 = params.beta0(s);
        if (a0 < -opts.slack || a0 > 1.0 + opts.slack || b0 < -opts.slack || b0 > 1.0 + opts.slack) {
            throw ConstructionError("twin_c: alpha0, beta0 must lie in [0,1]; at s=" + fmt(s) + " got alpha0=" +
                                    fmt(a0) + ", beta0=" + fmt(b0));
        }
        if (a0 + b0 > 1.0 + opts.slack) {
            throw ConstructionError("twin_c: alpha0+beta0=" + fmt(a0 + b0) + " exceeds 1 at s=" + fmt(s));
        }
    }
    FamilyDescriptor desc{"twin_c",
                          3,
                          {{"alpha0", params.alpha0.to_string()},
                           {"beta0", params.beta0.to_string()},
                           {"a", fmt(params.cutoff)}},
                          {params.cutoff},
                          {}};
    const TwinCParams p = params;
    auto eval = [p](double s, double t) {
        if (t >= p.cutoff) return twin_matrix({1.0, 0, 0, 0, 0, 0, 0, 0, 0});
        const double a0 = p.alpha0(s), b0 = p.beta0(s);
        return twin_matrix({0.0, 0, 0, a0, b0, 1.0 - a0 - b0, 0, 0, 0});
    };
    CubicProcessFamily family(std::move(desc), StochKind::OneTwo, ProductKind::MaksimovA,
                              BinaryOpTable::left_projection(3), opts.t_max, eval);
    return {TwinBranch::CataclysmC, std::move(family), std::nullopt, params};
}

NineEquationReport verify_nine_equations(const CubicProcessFamily& family, const TimeGrid& grid, double tol) {
    if (family.dim() != 3) throw std::domain_error("verify_nine_equations: twin model needs m=3");
    if (grid.t_max() > family.horizon() * (1.0 + 1e-12)) {
        throw std::domain_error("verify_nine_equations: grid exceeds family horizon");
    }
    {
        const auto probe = grid.pairs().front();
        require_pattern(family(probe[0], probe[1]), "verify_nine_equations");
    }

    NineEquationReport report;
    report.tol = tol;
    static const char* names[9] = {"a", "b", "c", "alpha", "beta", "gamma", "u", "v", "w"};
    for (int e = 0; e < 9; ++e) report.equations[e].equation = names[e];
    report.normalization.equation = "normalization";

    auto record = [&](EquationResidual& slot, double residual, double s, double tau, double t) {
        if (residual > slot.max_residual) {
            slot.max_residual = residual;
            slot.s = s;
            slot.tau = tau;
            slot.t = t;
        }
        if (residual > tol) ++slot.failures;
        if (residual > report.max_residual) report.max_residual = residual;
    };

    for (const auto& [s, tau, t] : grid.triples()) {
        const MiddleLayer st = middle_of(family(s, t));
        const MiddleLayer s_tau = middle_of(family(s, tau));
        const MiddleLayer tau_t = middle_of(family(tau, t));
        const double f = tau_t.alpha + tau_t.beta + tau_t.gamma;

        const double rhs_a = tau_t.a + tau_t.b + tau_t.c + s_tau.a * f + tau_t.u + tau_t.v + tau_t.w;
        record(report.equations[0], std::abs(st.a - rhs_a), s, tau, t);
        record(report.equations[1], std::abs(st.b - s_tau.b * f), s, tau, t);
        record(report.equations[2], std::abs(st.c - s_tau.c * f), s, tau, t);
        record(report.equations[3], std::abs(st.alpha - s_tau.alpha * f), s, tau, t);
        record(report.equations[4], std::abs(st.beta - s_tau.beta * f), s, tau, t);
        record(report.equations[5], std::abs(st.gamma - s_tau.gamma * f), s, tau, t);
        record(report.equations[6], std::abs(st.u - s_tau.u * f), s, tau, t);
        record(report.equations[7], std::abs(st.v - s_tau.v * f), s, tau, t);
        record(report.equations[8], std::abs(st.w - s_tau.w * f), s, tau, t);
    }
    for (const auto& [s, t] : grid.pairs()) {
        const MiddleLayer mid = middle_of(family(s, t));
        const double sum =
            mid.a + mid.b + mid.c + mid.alpha + mid.beta + mid.gamma + mid.u + mid.v + mid.w;
        record(report.normalization, std::abs(sum - 1.0), s, 0.0, t);
    }
    for (const auto& slot : report.equations) report.failures += slot.failures;
    report.failures += report.normalization.failures;
    return report;
}

VerificationReport cantor_checks(const std::function<double(double, double)>& f, const TimeGrid& grid,
                                 CantorEquation which, double tol) {
    VerificationReport report;
    report.check = which == CantorEquation::Second ? "cantor_second" : "cantor_first";
    report.tol = tol;
    for (const auto& [s, tau, t] : grid.triples()) {
        const double lhs = f(s, t);
        const double rhs =
            which == CantorEquation::Second ? f(s, tau) * f(tau, t) : f(s, tau) + f(tau, t);
        report.record({s, tau, t, std::abs(lhs - rhs)});
    }
    return report;
}

TwinReport twin_report(const TwinFamily& family, double s, double t) {
    if (family.branch == TwinBranch::ExtinctionA) {
        throw std::invalid_argument("twin_report: needs a branch-B or branch-C family");
    }
    const CubicMatrix q = family.family(s, t);
    require_pattern(q, "twin_report");
    const MiddleLayer mid = middle_of(q);

    TwinReport r;
    r.s = s;
    r.t = t;
    r.p_no_offspring = mid.a;
    r.p_single_female = mid.b + mid.alpha;
    r.p_single_male = mid.c + mid.u;
    r.p_twin_ff = mid.beta;
    r.p_twin_mixed = mid.gamma + mid.v;
    r.p_twin_mm = mid.w;

    if (family.branch == TwinBranch::SurvivalB && family.b_params && family.b_params->phi_limit) {
        const TwinBParams& p = *family.b_params;
        const double phi_inf = *p.phi_limit;
        const double gamma_s = 1.0 / p.phi(s) - p.alpha(s) - p.beta(s);
        r.has_limits = true;
        r.limit_ff = phi_inf * p.beta(s);
        r.limit_mixed = phi_inf * (gamma_s + p.v(s));
        r.limit_mm = phi_inf * p.w(s);
    }
    return r;
}

}  // namespace qsp
