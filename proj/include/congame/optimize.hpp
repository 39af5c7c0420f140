#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <utility>
#include <vector>

#include "congame/errors.hpp"

namespace congame {

struct MinimizeResult {
    std::vector<double> best_x;
    double best_f = 0.0;
    int evals = 0;
    std::vector<std::pair<int, double>> trace;  // (eval index, value)
};

// Derivative-free bounded minimization: Nelder-Mead simplex descent with the
// dimension-adaptive coefficients of Gao & Han and projection onto the box
// (every candidate is clamped coordinate-wise before evaluation). Fully
// deterministic for a fixed starting point. Stops when the evaluation budget
// runs out, or once the simplex has collapsed (its value spread is below
// `tol`) and a full iteration improves the best value by less than `tol` —
// a stalled iteration of a still-wide simplex is not convergence.
//
// The initial simplex steps each coordinate by a quarter of its range,
// flipping the step toward the interior when it would leave the box.
inline MinimizeResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                  std::vector<double> x0, const std::vector<double>& lower,
                                  const std::vector<double>& upper, int max_evals, double tol) {
    const std::size_t n = x0.size();
    if (n == 0) throw ValidationError("nelder_mead requires at least one dimension");
    if (max_evals < 1) throw ValidationError("nelder_mead requires a positive budget");

    const double nd = static_cast<double>(n);
    const double refl = 1.0;
    const double expa = 1.0 + 2.0 / nd;
    const double contr = 0.75 - 1.0 / (2.0 * nd);
    const double shrink = 1.0 - 1.0 / nd;

    auto clamp = [&](std::vector<double>& x) {
        for (std::size_t i = 0; i < n; ++i) x[i] = std::clamp(x[i], lower[i], upper[i]);
    };

    MinimizeResult result;
    bool exhausted = false;
    auto evaluate = [&](const std::vector<double>& x) {
        if (result.evals >= max_evals) {
            exhausted = true;
            return result.best_f;  // never used to update the simplex
        }
        double v = f(x);
        result.trace.emplace_back(result.evals, v);
        ++result.evals;
        if (result.best_x.empty() || v < result.best_f) {
            result.best_f = v;
            result.best_x = x;
        }
        return v;
    };

    clamp(x0);
    std::vector<std::vector<double>> simplex{x0};
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> vertex = x0;
        double step = 0.25 * (upper[i] - lower[i]);
        vertex[i] = vertex[i] + step <= upper[i] ? vertex[i] + step : vertex[i] - step;
        clamp(vertex);
        simplex.push_back(std::move(vertex));
    }
    std::vector<double> values;
    for (const auto& vertex : simplex) {
        values.push_back(evaluate(vertex));
        if (exhausted) return result;
    }

    std::vector<std::size_t> order(simplex.size());
    while (!exhausted) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        const double best_before = values[order.front()];
        const std::size_t worst = order.back();

        std::vector<double> centroid(n, 0.0);
        for (std::size_t r = 0; r + 1 < order.size(); ++r)
            for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[order[r]][i];
        for (double& c : centroid) c /= nd;

        auto blend = [&](double coeff) {
            std::vector<double> x(n);
            for (std::size_t i = 0; i < n; ++i)
                x[i] = centroid[i] + coeff * (centroid[i] - simplex[worst][i]);
            clamp(x);
            return x;
        };

        std::vector<double> reflected = blend(refl);
        double f_reflected = evaluate(reflected);
        if (exhausted) break;

        if (f_reflected < values[order.front()]) {
            std::vector<double> expanded = blend(refl * expa);
            double f_expanded = evaluate(expanded);
            if (exhausted) break;
            if (f_expanded < f_reflected) {
                simplex[worst] = std::move(expanded);
                values[worst] = f_expanded;
            } else {
                simplex[worst] = std::move(reflected);
                values[worst] = f_reflected;
            }
        } else if (f_reflected < values[order[order.size() - 2]]) {
            simplex[worst] = std::move(reflected);
            values[worst] = f_reflected;
        } else {
            const bool outside = f_reflected < values[worst];
            std::vector<double> contracted = blend(outside ? refl * contr : -contr);
            double f_contracted = evaluate(contracted);
            if (exhausted) break;
            const double bar = outside ? f_reflected : values[worst];
            if (f_contracted < bar) {
                simplex[worst] = std::move(contracted);
                values[worst] = f_contracted;
            } else {
                const std::size_t best = order.front();
                for (std::size_t r = 1; r < order.size(); ++r) {
                    const std::size_t v = order[r];
                    for (std::size_t i = 0; i < n; ++i)
                        simplex[v][i] =
                            simplex[best][i] + shrink * (simplex[v][i] - simplex[best][i]);
                    clamp(simplex[v]);
                    values[v] = evaluate(simplex[v]);
                    if (exhausted) break;
                }
                if (exhausted) break;
            }
        }

        const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
        if (*hi - *lo < tol && best_before - *lo < tol) break;
    }
    return result;
}

}  // namespace congame
