#include "qsp/markov_square.hpp"

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

void require_claim(const TimeFunction& f, ClaimKind kind, const char* fn_name, const char* claim_name,
                   const ValidationOptions& opts) {
    const ClaimResult r = validate_claim(f, FunctionClaim{kind, opts.t_max, opts.samples});
    if (!r.ok) {
        throw ConstructionError(std::string(fn_name) + ": claim '" + claim_name + "' failed at t=" +
                                fmt(r.counterexample_t) + " (value " + fmt(r.value) + "): " + r.message);
    }
}

}  // namespace

SquareProcessFamily::SquareProcessFamily(FamilyDescriptor desc, std::vector<StochKind> kinds, double horizon,
                                         std::function<SquareMatrix(double, double)> eval)
    : desc_(std::move(desc)), kinds_(std::move(kinds)), horizon_(horizon), m_(desc_.m), eval_(std::move(eval)) {
    if (!(horizon_ > 0.0)) throw std::invalid_argument("SquareProcessFamily: horizon must be positive");
    if (!eval_) throw std::invalid_argument("SquareProcessFamily: missing evaluator");
}

bool SquareProcessFamily::declares(StochKind kind) const {
    for (StochKind k : kinds_) {
        if (k == kind) return true;
        if (kind == StochKind::Right && k == StochKind::Doubly) return true;
        if (kind == StochKind::Left && k == StochKind::Doubly) return true;
    }
    return false;
}

SquareMatrix SquareProcessFamily::operator()(double s, double t) const {
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

SquareProcessFamily q1(const TimeFunction& g, const ValidationOptions& opts) {
    require_claim(g, ClaimKind::InUnitInterval, "q1", "g in [0,1]", opts);
    FamilyDescriptor d{"q1", 2, {{"g", g.to_string()}}, {}, {}};
    return SquareProcessFamily(std::move(d), {StochKind::Left}, opts.t_max, [g](double s, double) {
        const double gs = g(s);
        return SquareMatrix(2, {gs, gs, 1.0 - gs, 1.0 - gs});
    });
}

SquareProcessFamily q2(const TimeFunction& psi, const ValidationOptions& opts) {
    require_claim(psi, ClaimKind::Positive, "q2", "psi positive", opts);
    require_claim(psi, ClaimKind::Decreasing, "q2", "psi decreasing", opts);
    FamilyDescriptor d{"q2", 2, {{"psi", psi.to_string()}}, {}, {}};
    return SquareProcessFamily(std::move(d), {StochKind::Doubly}, opts.t_max, [psi](double s, double t) {
        const double r = psi(t) / psi(s);
        return SquareMatrix(2, {0.5 * (1.0 + r), 0.5 * (1.0 - r), 0.5 * (1.0 - r), 0.5 * (1.0 + r)});
    });
}

SquareProcessFamily q3(double b_cutoff, const ValidationOptions& opts) {
    if (!(b_cutoff > 0.0)) throw ConstructionError("q3: cutoff b must be positive, got " + fmt(b_cutoff));
    FamilyDescriptor d{"q3", 2, {{"b", fmt(b_cutoff)}}, {b_cutoff}, {}};
    return SquareProcessFamily(std::move(d), {StochKind::Doubly}, opts.t_max, [b_cutoff](double, double t) {
        if (t < b_cutoff) return SquareMatrix::identity(2);
        return SquareMatrix(2, {0.5, 0.5, 0.5, 0.5});
    });
}

SquareProcessFamily q4(const TimeFunction& psi, const ValidationOptions& opts) {
    require_claim(psi, ClaimKind::Positive, "q4", "psi positive", opts);
    require_claim(psi, ClaimKind::Decreasing, "q4", "psi decreasing", opts);
    FamilyDescriptor d{"q4", 2, {{"psi", psi.to_string()}}, {}, {}};
    return SquareProcessFamily(std::move(d), {StochKind::Right}, opts.t_max, [psi](double s, double t) {
        const double r = psi(t) / psi(s);
        return SquareMatrix(2, {1.0, 0.0, 1.0 - r, r});
    });
}

SquareProcessFamily q5(const TimeFunction& f, const ValidationOptions& opts) {
    require_claim(f, ClaimKind::InUnitInterval, "q5", "f in [0,1]", opts);
    FamilyDescriptor d{"q5", 2, {{"f", f.to_string()}}, {}, {}};
    return SquareProcessFamily(std::move(d), {StochKind::Right}, opts.t_max, [f](double, double t) {
        const double ft = f(t);
        return SquareMatrix(2, {ft, 1.0 - ft, ft, 1.0 - ft});
    });
}

SquareProcessFamily q6(double lambda, double mu, const TimeFunction& theta, const ValidationOptions& opts) {
    if (!(mu > 0.0) || !(2.0 * mu < lambda)) {
        throw ConstructionError("q6: needs 0 < 2*mu < lambda strictly, got lambda=" + fmt(lambda) +
                                ", mu=" + fmt(mu));
    }
    require_claim(theta, ClaimKind::Positive, "q6", "theta positive", opts);
    require_claim(theta, ClaimKind::Decreasing, "q6", "theta decreasing", opts);
    const double a = (lambda - 2.0 * mu) / (2.0 * (lambda - mu));
    const double b = lambda / (2.0 * (lambda - mu));
    FamilyDescriptor d{"q6", 2, {{"lambda", fmt(lambda)}, {"mu", fmt(mu)}, {"theta", theta.to_string()}}, {}, {}};
    return SquareProcessFamily(std::move(d), {StochKind::Right}, opts.t_max, [theta, a, b](double s, double t) {
        const double drop = 1.0 - theta(t) / theta(s);
        return SquareMatrix(2, {1.0 - a * drop, a * drop, b * drop, 1.0 - b * drop});
    });
}

SquareProcessFamily q7(double a_cutoff, const TimeFunction& g, const ValidationOptions& opts) {
    if (!(a_cutoff > 0.0)) throw ConstructionError("q7: cutoff a must be positive, got " + fmt(a_cutoff));
    require_claim(g, ClaimKind::InUnitInterval, "q7", "g in [0,1]", opts);
    FamilyDescriptor d{"q7", 2, {{"a", fmt(a_cutoff)}, {"g", g.to_string()}}, {a_cutoff}, {}};
    return SquareProcessFamily(std::move(d), {StochKind::Right}, opts.t_max, [a_cutoff, g](double, double t) {
        if (t < a_cutoff) return SquareMatrix::identity(2);
        const double gt = g(t);
        return SquareMatrix(2, {gt, 1.0 - gt, gt, 1.0 - gt});
    });
}

VerificationReport kce_residual_square(const SquareProcessFamily& family, const TimeGrid& grid, double tol) {
    if (grid.t_max() > family.horizon() * (1.0 + 1e-12)) {
        throw std::domain_error("kce_residual_square: grid exceeds family horizon");
    }
    VerificationReport report;
    report.check = "kce_square[" + family.descriptor().name + "]";
    report.tol = tol;
    for (const auto& [s, tau, t] : grid.triples()) {
        const SquareMatrix lhs = family(s, t);
        const SquareMatrix rhs = multiply(family(s, tau), family(tau, t));
        report.record({s, tau, t, max_abs_diff(lhs, rhs)});
    }
    return report;
}

}  // namespace qsp
