#include "liqarch/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace liqarch {

NmResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                     const std::vector<double>& start, const std::vector<double>& step,
                     int max_evals, double ftol) {
    const std::size_t n = start.size();
    NmResult res;
    if (n == 0) {
        res.x = start;
        res.fx = f(start);
        res.evals = 1;
        res.converged = true;
        return res;
    }

    constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;

    std::vector<std::vector<double>> pts(n + 1, start);
    for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step[i];

    std::vector<double> fv(n + 1);
    int evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        double v = f(x);
        if (!std::isfinite(v)) v = std::numeric_limits<double>::max();
        if (v < res.fx || res.evals == 0) {
            res.x = x;
            res.fx = v;
        }
        res.evals = evals;
        return v;
    };
    res.fx = std::numeric_limits<double>::max();
    for (std::size_t i = 0; i <= n; ++i) fv[i] = eval(pts[i]);

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), xr(n), xe(n), xc(n);

    while (evals < max_evals) {
        for (std::size_t i = 0; i <= n; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t best = order[0], worst = order[n], second = order[n - 1];

        if (fv[worst] - fv[best] <= ftol * (std::fabs(fv[best]) + ftol)) {
            res.converged = true;
            break;
        }

        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i <= n; ++i)
                if (i != worst) s += pts[i][j];
            centroid[j] = s / static_cast<double>(n);
        }

        for (std::size_t j = 0; j < n; ++j)
            xr[j] = centroid[j] + kReflect * (centroid[j] - pts[worst][j]);
        double fr = eval(xr);

        if (fr < fv[best]) {
            for (std::size_t j = 0; j < n; ++j)
                xe[j] = centroid[j] + kExpand * (xr[j] - centroid[j]);
            double fe = eval(xe);
            if (fe < fr) {
                pts[worst] = xe;
                fv[worst] = fe;
            } else {
                pts[worst] = xr;
                fv[worst] = fr;
            }
        } else if (fr < fv[second]) {
            pts[worst] = xr;
            fv[worst] = fr;
        } else {
            bool outside = fr < fv[worst];
            const std::vector<double>& base = outside ? xr : pts[worst];
            for (std::size_t j = 0; j < n; ++j)
                xc[j] = centroid[j] + kContract * (base[j] - centroid[j]);
            double fc = eval(xc);
            if (fc < (outside ? fr : fv[worst])) {
                pts[worst] = xc;
                fv[worst] = fc;
            } else {
                for (std::size_t i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    for (std::size_t j = 0; j < n; ++j)
                        pts[i][j] = pts[best][j] + kShrink * (pts[i][j] - pts[best][j]);
                    fv[i] = eval(pts[i]);
                    if (evals >= max_evals) break;
                }
            }
        }
    }
    return res;
}

}  // namespace liqarch
