#pragma once

#include <algorithm>
#include <ostream>
#include <string>
#include <vector>

#include "congame/errors.hpp"
#include "congame/game.hpp"
#include "congame/spin.hpp"
#include "congame/textio.hpp"

namespace congame {

enum class Objective { Social, Nash };

inline const char* to_string(Objective o) { return o == Objective::Social ? "social" : "nash"; }

// Soft carries the path-constraint penalty weight; Hard leaves the objective
// untouched and defers the constraint to the mixer.
struct ConstraintMode {
    enum class Kind { Soft, Hard };
    Kind kind = Kind::Hard;
    double penalty = 0.0;

    static ConstraintMode soft(double a) { return {Kind::Soft, a}; }
    static ConstraintMode hard() { return {Kind::Hard, 0.0}; }
};

// Occupation count of resource k as an affine spin expression:
// n_k = m_k/2 + (1/2) * sum of s over the (player, path) pairs containing k,
// where m_k is the number of such pairs.
inline AffineSpinExpr congestion_terms(const StrategyTable& table, int k) {
    AffineSpinExpr expr;
    for (int i = 0; i < table.num_players(); ++i) {
        const auto& paths = table.paths_per_player[static_cast<std::size_t>(i)];
        for (int j = 0; j < static_cast<int>(paths.size()); ++j) {
            const auto& ids = paths[static_cast<std::size_t>(j)].edge_ids;
            if (std::find(ids.begin(), ids.end(), k) != ids.end()) {
                expr.constant += 0.5;
                expr.add_term(table.var_index(i, j), 0.5);
            }
        }
    }
    return expr;
}

namespace detail {

// sum_k (linear_k * n_k + quad_k * n_k^2) over all resources.
inline SpinPolynomial compile_occupation_quadratic(const Game& game, const StrategyTable& table,
                                                   const std::vector<double>& linear,
                                                   const std::vector<double>& quad) {
    SpinPolynomial poly(table.spins());
    for (int k = 0; k < game.num_resources(); ++k) {
        AffineSpinExpr n_k = congestion_terms(table, k);
        if (n_k.terms.empty() && n_k.constant == 0.0) continue;
        poly.add_affine(n_k, linear[static_cast<std::size_t>(k)]);
        poly.add_product(n_k, n_k, quad[static_cast<std::size_t>(k)]);
    }
    return poly;
}

}  // namespace detail

// Combined delay over all players: sum_k n_k * (a_k + b_k * n_k).
inline SpinPolynomial compile_social(const Game& game, const StrategyTable& table) {
    std::vector<double> linear, quad;
    for (const Edge& e : game.edges) {
        linear.push_back(e.a);
        quad.push_back(e.b);
    }
    return detail::compile_occupation_quadratic(game, table, linear, quad);
}

// Potential function whose unilateral deviations track the deviating player's
// utility change: sum_k ((a_k + b_k/2) * n_k + (b_k/2) * n_k^2). Minimizers
// over feasible assignments are Nash equilibria.
inline SpinPolynomial compile_nash(const Game& game, const StrategyTable& table) {
    std::vector<double> linear, quad;
    for (const Edge& e : game.edges) {
        linear.push_back(e.a + 0.5 * e.b);
        quad.push_back(0.5 * e.b);
    }
    return detail::compile_occupation_quadratic(game, table, linear, quad);
}

// One-path-per-player constraint as a quadratic penalty:
// A * sum_i (sum_{j in S_i} s_{i,j} + |S_i| - 2)^2. Zero exactly on feasible
// assignments, at least 4A on any violation.
inline SpinPolynomial compile_path_penalty(const StrategyTable& table, double a) {
    if (!(a > 0.0)) throw ValidationError("penalty coefficient must be positive");
    SpinPolynomial poly(table.spins());
    for (int i = 0; i < table.num_players(); ++i) {
        AffineSpinExpr gap;
        gap.constant = static_cast<double>(table.block_size(i)) - 2.0;
        for (int j = 0; j < table.block_size(i); ++j) gap.add_term(table.var_index(i, j), 1.0);
        poly.add_product(gap, gap, a);
    }
    return poly;
}

// Penalty weight exceeding the objective's full value range, so every
// infeasible total cost clears every feasible one: (max - min) + 1 over all
// assignments, found by exhaustive scan.
inline double auto_penalty(const SpinPolynomial& cost) {
    if (cost.size() > 24) throw DomainError("spin count too large for exhaustive penalty scan");
    auto values = cost.values_over_assignments();
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return (*hi - *lo) + 1.0;
}

inline SpinPolynomial assemble(Objective objective, const ConstraintMode& mode, const Game& game,
                               const StrategyTable& table) {
    SpinPolynomial poly = objective == Objective::Social ? compile_social(game, table)
                                                         : compile_nash(game, table);
    if (mode.kind == ConstraintMode::Kind::Soft)
        poly.add(compile_path_penalty(table, mode.penalty));
    return poly;
}

// Text export: {"n": N, "c": real, "h": [...], "J": [{"i", "j", "v"}, ...]}
// with i < j, nonzero entries only, sorted by (i, j).
inline void write_ising(const SpinPolynomial& poly, std::ostream& out) {
    out << "{\n";
    out << "  \"n\": " << poly.size() << ",\n";
    out << "  \"c\": " << real12(poly.constant()) << ",\n";
    out << "  \"h\": [";
    for (int i = 0; i < poly.size(); ++i) {
        if (i) out << ", ";
        out << real12(poly.bias(i));
    }
    out << "],\n";
    out << "  \"J\": [";
    bool first = true;
    for (int i = 0; i < poly.size(); ++i) {
        for (int j = i + 1; j < poly.size(); ++j) {
            double v = poly.coupling(i, j);
            if (v == 0.0) continue;
            if (!first) out << ",";
            out << "\n    {\"i\": " << i << ", \"j\": " << j << ", \"v\": " << real12(v) << "}";
            first = false;
        }
    }
    out << (first ? "]\n" : "\n  ]\n");
    out << "}\n";
}

}  // namespace congame
