#include "qsp/stoch.hpp"

#include <cmath>
#include <stdexcept>

namespace qsp {

std::string kind_name(StochKind kind) {
    switch (kind) {
        case StochKind::OneTwo: return "(1,2)";
        case StochKind::OneThree: return "(1,3)";
        case StochKind::TwoThree: return "(2,3)";
        case StochKind::Three: return "3";
        case StochKind::TwiceStochastic: return "twice";
        case StochKind::Left: return "left";
        case StochKind::Right: return "right";
        case StochKind::Doubly: return "doubly";
    }
    return "?";
}

StochKind kind_from_name(const std::string& name) {
    if (name == "(1,2)" || name == "12") return StochKind::OneTwo;
    if (name == "(1,3)" || name == "13") return StochKind::OneThree;
    if (name == "(2,3)" || name == "23") return StochKind::TwoThree;
    if (name == "3") return StochKind::Three;
    if (name == "twice") return StochKind::TwiceStochastic;
    if (name == "left") return StochKind::Left;
    if (name == "right") return StochKind::Right;
    if (name == "doubly") return StochKind::Doubly;
    throw std::invalid_argument("unknown stochasticity kind '" + name + "'");
}

bool is_cubic_kind(StochKind kind) {
    switch (kind) {
        case StochKind::OneTwo:
        case StochKind::OneThree:
        case StochKind::TwoThree:
        case StochKind::Three:
        case StochKind::TwiceStochastic: return true;
        default: return false;
    }
}

namespace {

void finish(StochResult& r, double tol) {
    r.max_sum_deviation = 0.0;
    for (double d : r.sum_deviations)
        if (d > r.max_sum_deviation) r.max_sum_deviation = d;
    r.ok = r.min_entry >= -tol && r.max_sum_deviation <= tol;
}

double min_entry_of(const std::vector<double>& e) {
    double lo = e.empty() ? 0.0 : e[0];
    for (double v : e)
        if (v < lo) lo = v;
    return lo;
}

}  // namespace

StochResult is_stochastic(const CubicMatrix& q, StochKind kind, double tol) {
    if (!is_cubic_kind(kind)) {
        throw std::invalid_argument("is_stochastic: square kind '" + kind_name(kind) +
                                    "' passed for a cubic matrix");
    }
    if (tol < 0.0) throw std::invalid_argument("is_stochastic: tol must be nonnegative");
    const int m = q.dim();
    StochResult r;
    r.min_entry = min_entry_of(q.entries());

    auto push = [&r](double sum, double target) { r.sum_deviations.push_back(std::abs(sum - target)); };

    switch (kind) {
        case StochKind::OneTwo:
            for (int k = 0; k < m; ++k) {
                double s = 0.0;
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j < m; ++j) s += q(i, j, k);
                push(s, 1.0);
            }
            break;
        case StochKind::OneThree:
            for (int j = 0; j < m; ++j) {
                double s = 0.0;
                for (int i = 0; i < m; ++i)
                    for (int k = 0; k < m; ++k) s += q(i, j, k);
                push(s, 1.0);
            }
            break;
        case StochKind::TwoThree:
            for (int i = 0; i < m; ++i) {
                double s = 0.0;
                for (int j = 0; j < m; ++j)
                    for (int k = 0; k < m; ++k) s += q(i, j, k);
                push(s, 1.0);
            }
            break;
        case StochKind::Three:
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) {
                    double s = 0.0;
                    for (int k = 0; k < m; ++k) s += q(i, j, k);
                    push(s, 1.0);
                }
            break;
        case StochKind::TwiceStochastic: {
            // (2,3)-stochastic plus first-index sums of 1/m.
            for (int i = 0; i < m; ++i) {
                double s = 0.0;
                for (int j = 0; j < m; ++j)
                    for (int k = 0; k < m; ++k) s += q(i, j, k);
                push(s, 1.0);
            }
            const double target = 1.0 / m;
            for (int j = 0; j < m; ++j)
                for (int k = 0; k < m; ++k) {
                    double s = 0.0;
                    for (int i = 0; i < m; ++i) s += q(i, j, k);
                    push(s, target);
                }
            break;
        }
        default: break;
    }
    finish(r, tol);
    return r;
}

StochResult is_square_stochastic(const SquareMatrix& u, StochKind kind, double tol) {
    if (is_cubic_kind(kind)) {
        throw std::invalid_argument("is_square_stochastic: cubic kind '" + kind_name(kind) +
                                    "' passed for a square matrix");
    }
    if (tol < 0.0) throw std::invalid_argument("is_square_stochastic: tol must be nonnegative");
    const int m = u.dim();
    StochResult r;
    r.min_entry = min_entry_of(u.entries());

    auto row_sums = [&] {
        for (int i = 0; i < m; ++i) {
            double s = 0.0;
            for (int k = 0; k < m; ++k) s += u(i, k);
            r.sum_deviations.push_back(std::abs(s - 1.0));
        }
    };
    auto col_sums = [&] {
        for (int k = 0; k < m; ++k) {
            double s = 0.0;
            for (int i = 0; i < m; ++i) s += u(i, k);
            r.sum_deviations.push_back(std::abs(s - 1.0));
        }
    };

    if (kind == StochKind::Right) row_sums();
    if (kind == StochKind::Left) col_sums();
    if (kind == StochKind::Doubly) {
        row_sums();
        col_sums();
    }
    finish(r, tol);
    return r;
}

}  // namespace qsp
