#pragma once

#include <memory>
#include <string>
#include <vector>

namespace qsp {

namespace detail {
struct FnNode;
}

/// Immutable scalar function of time t >= 0. Values are either expression
/// trees over {+, -, *, /, exp, sin, cos, min, max, t, literals} or a
/// piecewise-constant table; evaluation is pure and thread-safe.
///
/// Grammar accepted by parse (EBNF):
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := number | 't' | func '(' expr ')' | '(' expr ')' | '-' factor
///   func   := 'exp' | 'sin' | 'cos' | 'min' | 'max'   (min/max binary, comma-separated)
class TimeFunction {
public:
    /// Parses an expression in the grammar above. Throws ParseError with the
    /// failing position on bad input.
    static TimeFunction parse(const std::string& text);

    static TimeFunction constant(double c);
    /// p + q*t
    static TimeFunction affine(double p, double q);
    /// p + q*exp(lambda*t)
    static TimeFunction exponential(double p, double q, double lambda);
    /// 1/(p + q*t)
    static TimeFunction reciprocal(double p, double q);
    /// p + q*sin(omega*t + phase)
    static TimeFunction periodic(double p, double q, double omega, double phase);
    /// values[0] on t < breaks[0], values[i] on [breaks[i-1], breaks[i]),
    /// values.back() on t >= breaks.back(). Requires strictly increasing breaks
    /// and values.size() == breaks.size() + 1.
    static TimeFunction piecewise_constant(std::vector<double> breaks, std::vector<double> values);

    /// Evaluates at t. Throws EvalError when a division hits a denominator of
    /// magnitude < 1e-300 or any step produces a non-finite value.
    double operator()(double t) const;

    /// Round-trippable for parsed/analytic forms: parse(to_string()) evaluates
    /// identically. Piecewise tables print as a non-parseable summary.
    std::string to_string() const;

private:
    explicit TimeFunction(std::shared_ptr<const detail::FnNode> root);
    std::shared_ptr<const detail::FnNode> root_;
};

enum class ClaimKind { Positive, Decreasing, Increasing, InUnitInterval };

/// A sampled property claim over the horizon [0, t_max].
struct FunctionClaim {
    ClaimKind kind = ClaimKind::Positive;
    double t_max = 10.0;
    int samples = 1024;
};

struct ClaimResult {
    bool ok = true;
    double counterexample_t = 0.0;
    double value = 0.0;
    std::string message;
};

/// Checks the claim on `samples` evenly spaced points of [0, t_max].
/// Monotonicity uses consecutive samples with slack 1e-12; positivity and
/// range are pointwise. On failure reports the first violating sample.
ClaimResult validate_claim(const TimeFunction& f, const FunctionClaim& claim);

/// Shared knobs for sampled validation in family constructors.
struct ValidationOptions {
    double t_max = 10.0;   // horizon
    int samples = 1024;    // one-parameter sweeps
    int pair_points = 48;  // grid points for (s,t) pair sweeps
    double slack = 1e-12;  // comparison slack
};

}  // namespace qsp
