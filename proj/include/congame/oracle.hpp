#pragma once

#include <bit>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "congame/encode.hpp"
#include "congame/errors.hpp"
#include "congame/game.hpp"
#include "congame/textio.hpp"

namespace congame {

// One point of the solution space. Bit v of `word` is the binary decision
// variable for spin v; the spin value is 2*bit - 1.
struct Assignment {
    int n = 0;
    std::uint64_t word = 0;

    int bit(int v) const { return static_cast<int>((word >> v) & 1); }
    int spin(int v) const { return spin_of(bit(v)); }

    // Variable 0 first, so "100001" selects variables 0 and 5.
    std::string to_string() const {
        std::string s(static_cast<std::size_t>(n), '0');
        for (int v = 0; v < n; ++v)
            if (bit(v)) s[static_cast<std::size_t>(v)] = '1';
        return s;
    }
};

// Utilities are populated only on feasible rows. Costs are defined on every
// row: occupation counts simply tally all selected (player, path) pairs.
struct SolutionRow {
    Assignment assignment;
    bool feasible = false;
    double social_cost = 0.0;
    double nash_cost = 0.0;
    std::vector<double> per_player_utility;
    double combined_utility = 0.0;
};

namespace detail {

inline std::vector<int> occupation_counts(const Game& game, const StrategyTable& table,
                                          std::uint64_t word) {
    std::vector<int> counts(static_cast<std::size_t>(game.num_resources()), 0);
    std::uint64_t w = word;
    while (w) {
        int var = std::countr_zero(w);
        w &= w - 1;
        for (int e : table.path_of_var(var).edge_ids) ++counts[static_cast<std::size_t>(e)];
    }
    return counts;
}

}  // namespace detail

// Evaluates every assignment directly from the definitions, never through
// compiled polynomials; this is what makes polynomial/oracle agreement a real
// check. The Nash cost keeps its explicit inner sum for the same reason.
inline std::vector<SolutionRow> evaluate_all(const Game& game, const StrategyTable& table) {
    const int n = table.spins();
    if (n > 24) throw DomainError("solution space too large for brute force (more than 24 spins)");

    std::vector<SolutionRow> rows;
    rows.reserve(std::size_t{1} << n);
    for (std::uint64_t word = 0; word < (std::uint64_t{1} << n); ++word) {
        SolutionRow row;
        row.assignment = {n, word};
        row.feasible = table.feasible_word(word);

        auto counts = detail::occupation_counts(game, table, word);
        for (int k = 0; k < game.num_resources(); ++k) {
            int n_k = counts[static_cast<std::size_t>(k)];
            row.social_cost += n_k * game.delay(k, n_k);
            for (int j = 1; j <= n_k; ++j) row.nash_cost += game.delay(k, j);
        }

        if (row.feasible) {
            for (int i = 0; i < table.num_players(); ++i) {
                std::uint64_t block = (word >> table.block_start[static_cast<std::size_t>(i)])
                                      & ((std::uint64_t{1} << table.block_size(i)) - 1);
                int path = std::countr_zero(block);
                double utility = 0.0;
                for (int e : table.paths_per_player[static_cast<std::size_t>(i)]
                                                   [static_cast<std::size_t>(path)]
                                 .edge_ids)
                    utility += game.delay(e, counts[static_cast<std::size_t>(e)]);
                row.per_player_utility.push_back(utility);
                row.combined_utility += utility;
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

// Feasible row minimizing the chosen cost; ties go to the smallest binary
// value, which is the first one met in ascending row order.
inline const SolutionRow& optimum(std::span<const SolutionRow> rows, Objective objective) {
    const SolutionRow* best = nullptr;
    for (const SolutionRow& row : rows) {
        if (!row.feasible) continue;
        double cost = objective == Objective::Social ? row.social_cost : row.nash_cost;
        if (!best
            || cost < (objective == Objective::Social ? best->social_cost : best->nash_cost))
            best = &row;
    }
    if (!best) throw DomainError("no feasible solution");
    return *best;
}

struct Deviation {
    int player = 0;
    int current_path = 0;
    int best_alt_path = -1;  // -1 when the player has a single path
    double utility_delta = 0.0;  // best alternative utility minus current
};

struct NashCertificate {
    bool is_nash = true;
    std::vector<Deviation> deviations;  // one per player
};

// Checks every unilateral path switch. A profile fails only if some player
// can strictly lower their own delay (beyond a 1e-9 slack for arithmetic).
inline NashCertificate verify_nash(const Game& game, const StrategyTable& table,
                                   const SolutionRow& row) {
    if (!row.feasible) throw DomainError("nash verification requires a feasible row");

    auto base_counts = detail::occupation_counts(game, table, row.assignment.word);
    NashCertificate cert;
    for (int i = 0; i < table.num_players(); ++i) {
        std::uint64_t block =
            (row.assignment.word >> table.block_start[static_cast<std::size_t>(i)])
            & ((std::uint64_t{1} << table.block_size(i)) - 1);
        int current = std::countr_zero(block);
        double current_utility = row.per_player_utility[static_cast<std::size_t>(i)];

        Deviation dev{i, current, -1, 0.0};
        for (int alt = 0; alt < table.block_size(i); ++alt) {
            if (alt == current) continue;
            auto counts = base_counts;
            for (int e : table.paths_per_player[static_cast<std::size_t>(i)]
                                               [static_cast<std::size_t>(current)]
                             .edge_ids)
                --counts[static_cast<std::size_t>(e)];
            const auto& alt_path =
                table.paths_per_player[static_cast<std::size_t>(i)][static_cast<std::size_t>(alt)];
            for (int e : alt_path.edge_ids) ++counts[static_cast<std::size_t>(e)];
            double alt_utility = 0.0;
            for (int e : alt_path.edge_ids)
                alt_utility += game.delay(e, counts[static_cast<std::size_t>(e)]);
            double delta = alt_utility - current_utility;
            if (dev.best_alt_path < 0 || delta < dev.utility_delta) {
                dev.best_alt_path = alt;
                dev.utility_delta = delta;
            }
        }
        if (dev.best_alt_path >= 0 && dev.utility_delta < -1e-9) cert.is_nash = false;
        cert.deviations.push_back(dev);
    }
    return cert;
}

// CSV in row order; utility columns are empty on infeasible rows.
inline void write_solution_csv(std::span<const SolutionRow> rows, std::ostream& out) {
    out << "bits,feasible,social_cost,nash_cost,combined_utility,per_player_utilities\n";
    for (const SolutionRow& row : rows) {
        out << row.assignment.to_string() << ',' << (row.feasible ? 1 : 0) << ','
            << real12(row.social_cost) << ',' << real12(row.nash_cost) << ',';
        if (row.feasible) {
            out << real12(row.combined_utility) << ',';
            for (std::size_t i = 0; i < row.per_player_utility.size(); ++i) {
                if (i) out << ';';
                out << real12(row.per_player_utility[i]);
            }
        } else {
            out << ',';
        }
        out << '\n';
    }
}

}  // namespace congame
