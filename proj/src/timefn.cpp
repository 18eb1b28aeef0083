#include "qsp/timefn.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <utility>

#include "qsp/exceptions.hpp"

namespace qsp {

namespace detail {

enum class Op { Number, Var, Neg, Add, Sub, Mul, Div, Exp, Sin, Cos, Min, Max, Piecewise };

struct FnNode {
    Op op = Op::Number;
    double value = 0.0;
    std::shared_ptr<const FnNode> lhs;
    std::shared_ptr<const FnNode> rhs;
    std::vector<double> breaks;
    std::vector<double> values;
};

namespace {

using NodePtr = std::shared_ptr<const FnNode>;

NodePtr make_num(double v) {
    auto n = std::make_shared<FnNode>();
    n->op = Op::Number;
    n->value = v;
    return n;
}

NodePtr make_var() {
    auto n = std::make_shared<FnNode>();
    n->op = Op::Var;
    return n;
}

NodePtr make_unary(Op op, NodePtr a) {
    auto n = std::make_shared<FnNode>();
    n->op = op;
    n->lhs = std::move(a);
    return n;
}

NodePtr make_binary(Op op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<FnNode>();
    n->op = op;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

std::string num_str(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string print(const FnNode& n) {
    switch (n.op) {
        case Op::Number: return num_str(n.value);
        case Op::Var: return "t";
        case Op::Neg: return "(-" + print(*n.lhs) + ")";
        case Op::Add: return "(" + print(*n.lhs) + "+" + print(*n.rhs) + ")";
        case Op::Sub: return "(" + print(*n.lhs) + "-" + print(*n.rhs) + ")";
        case Op::Mul: return "(" + print(*n.lhs) + "*" + print(*n.rhs) + ")";
        case Op::Div: return "(" + print(*n.lhs) + "/" + print(*n.rhs) + ")";
        case Op::Exp: return "exp(" + print(*n.lhs) + ")";
        case Op::Sin: return "sin(" + print(*n.lhs) + ")";
        case Op::Cos: return "cos(" + print(*n.lhs) + ")";
        case Op::Min: return "min(" + print(*n.lhs) + "," + print(*n.rhs) + ")";
        case Op::Max: return "max(" + print(*n.lhs) + "," + print(*n.rhs) + ")";
        case Op::Piecewise: {
            std::string s = "piecewise[";
            for (std::size_t i = 0; i < n.values.size(); ++i) {
                if (i) s += ";";
                s += num_str(n.values[i]);
            }
            s += "]";
            return s;
        }
    }
    return "?";
}

double eval_node(const FnNode& n, double t) {
    auto require_finite = [&](double v) {
        if (!std::isfinite(v)) throw EvalError("non-finite result", t, print(n));
        return v;
    };
    switch (n.op) {
        case Op::Number: return n.value;
        case Op::Var: return t;
        case Op::Neg: return -eval_node(*n.lhs, t);
        case Op::Add: return require_finite(eval_node(*n.lhs, t) + eval_node(*n.rhs, t));
        case Op::Sub: return require_finite(eval_node(*n.lhs, t) - eval_node(*n.rhs, t));
        case Op::Mul: return require_finite(eval_node(*n.lhs, t) * eval_node(*n.rhs, t));
        case Op::Div: {
            const double den = eval_node(*n.rhs, t);
            if (std::abs(den) < 1e-300) throw EvalError("division by near-zero", t, print(n));
            return require_finite(eval_node(*n.lhs, t) / den);
        }
        case Op::Exp: return require_finite(std::exp(eval_node(*n.lhs, t)));
        case Op::Sin: return std::sin(eval_node(*n.lhs, t));
        case Op::Cos: return std::cos(eval_node(*n.lhs, t));
        case Op::Min: return std::fmin(eval_node(*n.lhs, t), eval_node(*n.rhs, t));
        case Op::Max: return std::fmax(eval_node(*n.lhs, t), eval_node(*n.rhs, t));
        case Op::Piecewise: {
            std::size_t idx = 0;
            while (idx < n.breaks.size() && t >= n.breaks[idx]) ++idx;
            return n.values[idx];
        }
    }
    throw EvalError("bad node", t, "?");
}

class Parser {
public:
    explicit Parser(const std::string& text) : s_(text) {}

    NodePtr parse() {
        skip_ws();
        if (pos_ >= s_.size()) throw ParseError("empty expression", 0);
        NodePtr e = expr();
        skip_ws();
        if (pos_ != s_.size()) throw ParseError("unexpected trailing input", pos_);
        return e;
    }

private:
    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            skip_ws();
            if (peek() == '+') {
                ++pos_;
                lhs = make_binary(Op::Add, lhs, term());
            } else if (peek() == '-') {
                ++pos_;
                lhs = make_binary(Op::Sub, lhs, term());
            } else {
                return lhs;
            }
        }
    }

    NodePtr term() {
        NodePtr lhs = factor();
        for (;;) {
            skip_ws();
            if (peek() == '*') {
                ++pos_;
                lhs = make_binary(Op::Mul, lhs, factor());
            } else if (peek() == '/') {
                ++pos_;
                lhs = make_binary(Op::Div, lhs, factor());
            } else {
                return lhs;
            }
        }
    }

    NodePtr factor() {
        skip_ws();
        if (pos_ >= s_.size()) throw ParseError("expected factor", pos_);
        const char c = s_[pos_];
        if (c == '-') {
            ++pos_;
            return make_unary(Op::Neg, factor());
        }
        if (c == '(') {
            ++pos_;
            NodePtr inner = expr();
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    NodePtr number() {
        const std::size_t start = pos_;
        const char* begin = s_.c_str() + start;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) throw ParseError("malformed number", start);
        pos_ = start + static_cast<std::size_t>(end - begin);
        if (!std::isfinite(v)) throw ParseError("non-finite literal", start);
        return make_num(v);
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            ++pos_;
        const std::string name = s_.substr(start, pos_ - start);
        if (name == "t") return make_var();
        Op op;
        int arity;
        if (name == "exp") {
            op = Op::Exp;
            arity = 1;
        } else if (name == "sin") {
            op = Op::Sin;
            arity = 1;
        } else if (name == "cos") {
            op = Op::Cos;
            arity = 1;
        } else if (name == "min") {
            op = Op::Min;
            arity = 2;
        } else if (name == "max") {
            op = Op::Max;
            arity = 2;
        } else {
            throw ParseError("unknown identifier '" + name + "'", start);
        }
        skip_ws();
        expect('(');
        NodePtr first = expr();
        if (arity == 1) {
            skip_ws();
            if (peek() == ',') throw ParseError("'" + name + "' takes one argument", pos_);
            expect(')');
            return make_unary(op, first);
        }
        skip_ws();
        if (peek() != ',') throw ParseError("'" + name + "' takes two arguments", pos_);
        ++pos_;
        NodePtr second = expr();
        expect(')');
        return make_binary(op, first, second);
    }

    void expect(char c) {
        skip_ws();
        if (pos_ >= s_.size() || s_[pos_] != c) {
            throw ParseError(std::string("expected '") + c + "'", pos_);
        }
        ++pos_;
    }

    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

}  // namespace
}  // namespace detail

TimeFunction::TimeFunction(std::shared_ptr<const detail::FnNode> root) : root_(std::move(root)) {}

TimeFunction TimeFunction::parse(const std::string& text) {
    return TimeFunction(detail::Parser(text).parse());
}

TimeFunction TimeFunction::constant(double c) { return TimeFunction(detail::make_num(c)); }

TimeFunction TimeFunction::affine(double p, double q) {
    using namespace detail;
    return TimeFunction(make_binary(Op::Add, make_num(p), make_binary(Op::Mul, make_num(q), make_var())));
}

TimeFunction TimeFunction::exponential(double p, double q, double lambda) {
    using namespace detail;
    NodePtr e = make_unary(Op::Exp, make_binary(Op::Mul, make_num(lambda), make_var()));
    return TimeFunction(make_binary(Op::Add, make_num(p), make_binary(Op::Mul, make_num(q), std::move(e))));
}

TimeFunction TimeFunction::reciprocal(double p, double q) {
    using namespace detail;
    NodePtr den = make_binary(Op::Add, make_num(p), make_binary(Op::Mul, make_num(q), make_var()));
    return TimeFunction(make_binary(Op::Div, make_num(1.0), std::move(den)));
}

TimeFunction TimeFunction::periodic(double p, double q, double omega, double phase) {
    using namespace detail;
    NodePtr arg = make_binary(Op::Add, make_binary(Op::Mul, make_num(omega), make_var()), make_num(phase));
    NodePtr s = make_unary(Op::Sin, std::move(arg));
    return TimeFunction(make_binary(Op::Add, make_num(p), make_binary(Op::Mul, make_num(q), std::move(s))));
}

TimeFunction TimeFunction::piecewise_constant(std::vector<double> breaks, std::vector<double> values) {
    if (values.size() != breaks.size() + 1) {
        throw std::invalid_argument("piecewise_constant: need breaks.size()+1 values");
    }
    for (std::size_t i = 1; i < breaks.size(); ++i) {
        if (!(breaks[i] > breaks[i - 1])) {
            throw std::invalid_argument("piecewise_constant: breakpoints must be strictly increasing");
        }
    }
    for (double v : values) {
        if (!std::isfinite(v)) throw std::invalid_argument("piecewise_constant: non-finite value");
    }
    auto n = std::make_shared<detail::FnNode>();
    n->op = detail::Op::Piecewise;
    n->breaks = std::move(breaks);
    n->values = std::move(values);
    return TimeFunction(n);
}

double TimeFunction::operator()(double t) const { return detail::eval_node(*root_, t); }

std::string TimeFunction::to_string() const { return detail::print(*root_); }

ClaimResult validate_claim(const TimeFunction& f, const FunctionClaim& claim) {
    if (claim.samples < 2) throw std::invalid_argument("FunctionClaim: samples must be >= 2");
    if (!(claim.t_max > 0.0)) throw std::invalid_argument("FunctionClaim: t_max must be positive");
    constexpr double kSlack = 1e-12;
    ClaimResult r;
    const int n = claim.samples;
    double prev = 0.0;
    for (int s = 0; s < n; ++s) {
        const double t = claim.t_max * s / (n - 1);
        const double v = f(t);
        switch (claim.kind) {
            case ClaimKind::Positive:
                if (!(v > 0.0)) {
                    r = {false, t, v, "expected positive value"};
                    return r;
                }
                break;
            case ClaimKind::InUnitInterval:
                if (v < -kSlack || v > 1.0 + kSlack) {
                    r = {false, t, v, "expected value in [0,1]"};
                    return r;
                }
                break;
            case ClaimKind::Decreasing:
                if (s > 0 && v > prev + kSlack) {
                    r = {false, t, v, "expected non-increasing values"};
                    return r;
                }
                break;
            case ClaimKind::Increasing:
                if (s > 0 && v < prev - kSlack) {
                    r = {false, t, v, "expected non-decreasing values"};
                    return r;
                }
                break;
        }
        prev = v;
    }
    return r;
}

}  // namespace qsp
