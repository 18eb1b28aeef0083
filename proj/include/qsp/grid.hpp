#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace qsp {

/// Strictly increasing sample times in [0, t_max], at least 3 of them.
class TimeGrid {
public:
    explicit TimeGrid(std::vector<double> points);

    /// n evenly spaced points covering [0, t_max].
    static TimeGrid uniform(double t_max, int n);
    /// Uniform grid merged with extra points (deduplicated, sorted).
    static TimeGrid uniform_with(double t_max, int n, const std::vector<double>& extra);

    const std::vector<double>& points() const { return pts_; }
    double t_max() const { return pts_.back(); }

    /// All ordered triples s < tau < t.
    std::vector<std::array<double, 3>> triples() const;
    /// All ordered pairs s < t.
    std::vector<std::array<double, 2>> pairs() const;

private:
    std::vector<double> pts_;
};

struct TripleResidual {
    double s = 0.0, tau = 0.0, t = 0.0;
    double residual = 0.0;
};

/// Residual statistics from a functional-equation sweep over a grid.
struct VerificationReport {
    std::string check;
    double tol = 1e-9;
    std::vector<TripleResidual> residuals;  // one per checked triple
    double max_residual = 0.0;
    std::size_t failures = 0;  // residuals above tol
    TripleResidual worst;

    bool pass() const { return failures == 0; }
    void record(const TripleResidual& r);
};

}  // namespace qsp
