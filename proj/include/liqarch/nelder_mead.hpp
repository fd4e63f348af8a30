#pragma once

#include <functional>
#include <vector>

namespace liqarch {

struct NmResult {
    std::vector<double> x;  // best point ever evaluated
    double fx = 0.0;
    int evals = 0;
    bool converged = false;
};

// Deterministic Nelder-Mead simplex minimizer. The initial simplex is the
// start point plus one vertex per coordinate offset by step[i], so the start
// point is always a vertex and the returned objective can never exceed the
// starting objective.
NmResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                     const std::vector<double>& start, const std::vector<double>& step,
                     int max_evals, double ftol);

}  // namespace liqarch
