#include "qsp/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qsp/exceptions.hpp"
#include "qsp/stoch.hpp"

namespace qsp {

namespace {
constexpr double kSimplexTol = 1e-12;
}

Distribution::Distribution(std::vector<double> probs, Raw) : p_(std::move(probs)) {}

Distribution::Distribution(std::vector<double> probs) : p_(std::move(probs)) {
    if (p_.empty()) throw std::invalid_argument("Distribution: empty");
    double sum = 0.0;
    for (double v : p_) {
        if (!std::isfinite(v)) throw std::invalid_argument("Distribution: non-finite entry");
        if (v < 0.0) throw std::invalid_argument("Distribution: negative entry " + std::to_string(v));
        sum += v;
    }
    if (std::abs(sum - 1.0) > kSimplexTol) {
        throw std::invalid_argument("Distribution: entries sum to " + std::to_string(sum) + ", not 1");
    }
}

Distribution Distribution::from_raw(std::vector<double> raw) {
    if (raw.empty()) throw std::invalid_argument("Distribution: empty");
    double sum = 0.0;
    for (double& v : raw) {
        if (!std::isfinite(v)) throw std::invalid_argument("Distribution: non-finite entry");
        if (v < -kSimplexTol) {
            throw std::invalid_argument("Distribution: entry " + std::to_string(v) +
                                        " below -1e-12, refusing to clamp");
        }
        if (v < 0.0) v = 0.0;
        sum += v;
    }
    if (std::abs(sum - 1.0) > kSimplexTol) {
        throw std::invalid_argument("Distribution: entries sum to " + std::to_string(sum) +
                                    ", off by more than 1e-12");
    }
    for (double& v : raw) v /= sum;
    return Distribution(std::move(raw), Raw{});
}

Distribution Distribution::uniform(int m) {
    if (m < 1) throw std::invalid_argument("Distribution::uniform: m must be positive");
    return Distribution(std::vector<double>(m, 1.0 / m), Raw{});
}

double max_abs_diff(const Distribution& a, const Distribution& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("max_abs_diff: dimension mismatch");
    double worst = 0.0;
    for (int i = 0; i < a.dim(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

Distribution step_quadratic(const CubicMatrix& p, const Distribution& x, double tol) {
    const int m = p.dim();
    if (x.dim() != m) throw std::invalid_argument("step_quadratic: dimension mismatch");
    const StochResult check = is_stochastic(p, StochKind::Three, tol);
    if (!check.ok) {
        throw std::domain_error("step_quadratic: matrix is not 3-stochastic (worst sum deviation " +
                                std::to_string(check.max_sum_deviation) + ")");
    }
    std::vector<double> out(m, 0.0);
    for (int k = 0; k < m; ++k) {
        double sum = 0.0;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) sum += p(i, j, k) * x[i] * x[j];
        out[k] = sum;
    }
    return Distribution::from_raw(std::move(out));
}

Distribution step_linear_12(const CubicMatrix& p, const Distribution& x, double tol) {
    const int m = p.dim();
    if (x.dim() != m) throw std::invalid_argument("step_linear_12: dimension mismatch");
    const StochResult check = is_stochastic(p, StochKind::OneTwo, tol);
    if (!check.ok) {
        throw std::domain_error("step_linear_12: matrix is not (1,2)-stochastic (worst sum deviation " +
                                std::to_string(check.max_sum_deviation) + ")");
    }
    std::vector<double> out(m, 0.0);
    for (int k = 0; k < m; ++k) {
        double sum = 0.0;
        for (int j = 0; j < m; ++j) {
            double coeff = 0.0;
            for (int i = 0; i < m; ++i) coeff += p(k, i, j) + p(i, k, j);
            sum += 0.5 * coeff * x[j];
        }
        out[k] = sum;
    }
    return Distribution::from_raw(std::move(out));
}

Distribution step(const CubicMatrix& p, StochKind kind, const Distribution& x, double tol) {
    switch (kind) {
        case StochKind::Three: return step_quadratic(p, x, tol);
        case StochKind::OneTwo: return step_linear_12(p, x, tol);
        default:
            throw std::domain_error("step: no distribution rule for kind '" + kind_name(kind) + "'");
    }
}

namespace {

void check_times(double s0, const std::vector<double>& times) {
    if (times.empty()) throw std::invalid_argument("trajectory: no times");
    double prev = s0;
    for (double t : times) {
        if (!(t > prev)) {
            throw std::invalid_argument("trajectory: times must strictly increase and stay above s0");
        }
        prev = t;
    }
}

}  // namespace

Trajectory trajectory(const CubicProcessFamily& family, const Distribution& x0, double s0,
                      const std::vector<double>& times) {
    check_times(s0, times);
    Trajectory out;
    out.family = family.descriptor().name;
    out.s0 = s0;
    out.times = times;
    out.states.reserve(times.size());
    for (double t : times) {
        out.states.push_back(step(family(s0, t), family.declared_kind(), x0));
    }
    return out;
}

Trajectory trajectory_rebased(const CubicProcessFamily& family, const Distribution& x0, double s0,
                              const std::vector<double>& times) {
    check_times(s0, times);
    Trajectory out;
    out.family = family.descriptor().name + " (rebased)";
    out.s0 = s0;
    out.times = times;
    out.states.reserve(times.size());
    Distribution x = x0;
    double s = s0;
    for (double t : times) {
        x = step(family(s, t), family.declared_kind(), x);
        out.states.push_back(x);
        s = t;
    }
    return out;
}

Distribution closed_form_m1(const M1Params& params, double s) {
    const double a = 0.5 * (params.g(s) + params.u11(s) + params.u21(s));
    return Distribution::from_raw({a, 1.0 - a});
}

Distribution closed_form_m2_limit(const M2Params& params, double s, const Distribution& x_s) {
    if (!params.psi_limit) {
        throw std::invalid_argument("closed_form_m2_limit: psi has no declared limit");
    }
    if (x_s.dim() != 2) throw std::invalid_argument("closed_form_m2_limit: needs a 2-type distribution");
    const double zeta_sum = params.zeta11(s) + params.zeta21(s);
    const double drive = params.gamma11(s) + params.gamma21(s) + 1.0 / params.psi(s);
    const double psi_inf = *params.psi_limit;
    const double x1 = 0.25 * (1.0 + zeta_sum + drive * psi_inf) * x_s[0] +
                      0.25 * (1.0 + zeta_sum - drive * psi_inf) * x_s[1];
    return Distribution::from_raw({x1, 1.0 - x1});
}

}  // namespace qsp
