#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "congame/encode.hpp"
#include "congame/errors.hpp"
#include "congame/game.hpp"
#include "congame/optimize.hpp"
#include "congame/oracle.hpp"
#include "congame/rng.hpp"
#include "congame/statevector.hpp"

namespace congame {

enum class Variant { SoftX, HardParity };

inline const char* to_string(Variant v) { return v == Variant::SoftX ? "soft-x" : "hard-parity"; }

// One QAOA experiment: which ansatz, how many layers, how the hard variant is
// initialized, and how the classical outer loop is seeded and budgeted.
// max_evals == 0 means the default budget of 200*p objective evaluations.
struct QaoaConfig {
    Variant variant = Variant::SoftX;
    int p = 1;
    std::optional<double> premix_beta0;  // hard variant only
    std::vector<int> initial_bits;       // hard variant only; empty = first path per player
    std::uint64_t seed = 1;
    int max_evals = 0;
};

struct AngleVector {
    std::vector<double> betas;   // each in [0, pi]
    std::vector<double> gammas;  // each in [0, 2pi]
};

struct RunRecord {
    QaoaConfig config;
    AngleVector best_angles;
    double best_expectation = 0.0;
    std::vector<double> final_probabilities;
    Assignment most_probable;
    std::vector<std::pair<int, double>> eval_trace;  // (eval index, expectation)
};

inline void validate_angles(const AngleVector& angles, int p) {
    if (static_cast<int>(angles.betas.size()) != p
        || static_cast<int>(angles.gammas.size()) != p)
        throw ValidationError("angle vector length does not match layer count");
    for (double b : angles.betas)
        if (!(b >= 0.0 && b <= std::numbers::pi)) throw ValidationError("beta out of [0, pi]");
    for (double g : angles.gammas)
        if (!(g >= 0.0 && g <= 2.0 * std::numbers::pi))
            throw ValidationError("gamma out of [0, 2*pi]");
}

// Resolves the hard variant's start state; validates variant-specific fields.
inline std::uint64_t validate_config(const QaoaConfig& config, const StrategyTable& table) {
    if (config.p < 0) throw ValidationError("layer count must be non-negative");
    if (config.variant == Variant::SoftX) {
        if (config.premix_beta0)
            throw ValidationError("premix is only available with the hard-constraint variant");
        if (!config.initial_bits.empty())
            throw ValidationError(
                "initial bits are only available with the hard-constraint variant");
        return 0;
    }
    if (config.initial_bits.empty()) return table.first_choice_word();
    if (static_cast<int>(config.initial_bits.size()) != table.spins())
        throw ValidationError("initial bit count does not match spin count");
    std::uint64_t word = 0;
    for (int v = 0; v < table.spins(); ++v)
        if (config.initial_bits[static_cast<std::size_t>(v)]) word |= std::uint64_t{1} << v;
    if (!table.feasible_word(word))
        throw ValidationError("initial bits must select exactly one path per player");
    return word;
}

namespace detail {

inline void apply_all_parity_mixers(StateVector& sv, const StrategyTable& table, double beta) {
    for (int i = 0; i < table.num_players(); ++i)
        apply_parity_mixer(sv, table.block_start[static_cast<std::size_t>(i)],
                           table.block_size(i), beta);
}

}  // namespace detail

// Observer is called once after state preparation (layer index 0, premix
// included) and once after each alternating layer (indices 1..p).
using LayerObserver = std::function<void(const StateVector&, int)>;

inline StateVector run_circuit(const QaoaConfig& config, const AngleVector& angles,
                               const CostTable& cost, const StrategyTable& table,
                               const LayerObserver& observer = {}) {
    if (cost.num_qubits != table.spins())
        throw ValidationError("cost table does not match the strategy table");
    std::uint64_t initial = validate_config(config, table);
    validate_angles(angles, config.p);

    StateVector sv;
    if (config.variant == Variant::SoftX) {
        sv = prepare_plus(table.spins());
    } else {
        std::vector<int> bits(static_cast<std::size_t>(table.spins()), 0);
        for (int v = 0; v < table.spins(); ++v)
            bits[static_cast<std::size_t>(v)] = static_cast<int>((initial >> v) & 1);
        sv = prepare_basis(bits);
        if (config.premix_beta0) detail::apply_all_parity_mixers(sv, table, *config.premix_beta0);
    }
    if (observer) observer(sv, 0);

    for (int layer = 0; layer < config.p; ++layer) {
        apply_cost_phase(sv, cost, angles.gammas[static_cast<std::size_t>(layer)]);
        double beta = angles.betas[static_cast<std::size_t>(layer)];
        if (config.variant == Variant::SoftX)
            apply_x_mixer(sv, beta);
        else
            detail::apply_all_parity_mixers(sv, table, beta);
        if (observer) observer(sv, layer + 1);
    }
    return sv;
}

// p = 1 landscape scan: rows sweep beta over [0, pi], columns sweep gamma over
// [0, 2*pi], both with inclusive endpoints. values[i*grid + j] pairs
// betas[i] with gammas[j].
struct HeatmapResult {
    int grid = 0;
    std::vector<double> betas;
    std::vector<double> gammas;
    std::vector<double> values;

    double at(int i, int j) const {
        return values[static_cast<std::size_t>(i) * static_cast<std::size_t>(grid)
                      + static_cast<std::size_t>(j)];
    }
};

inline HeatmapResult heatmap(const QaoaConfig& config, const CostTable& cost,
                             const StrategyTable& table, int grid) {
    if (config.p != 1) throw ValidationError("heat map requires exactly one layer");
    if (grid < 2) throw ValidationError("heat map grid must be at least 2");
    validate_config(config, table);

    HeatmapResult result;
    result.grid = grid;
    for (int i = 0; i < grid; ++i) {
        double t = static_cast<double>(i) / static_cast<double>(grid - 1);
        result.betas.push_back(std::numbers::pi * t);
        result.gammas.push_back(2.0 * std::numbers::pi * t);
    }
    result.values.reserve(static_cast<std::size_t>(grid) * static_cast<std::size_t>(grid));
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            AngleVector angles{{result.betas[static_cast<std::size_t>(i)]},
                               {result.gammas[static_cast<std::size_t>(j)]}};
            StateVector sv = run_circuit(config, angles, cost, table);
            result.values.push_back(expectation(sv, cost));
        }
    }
    return result;
}

namespace detail {

inline AngleVector unpack_angles(std::span<const double> x, int p) {
    AngleVector angles;
    angles.betas.assign(x.begin(), x.begin() + p);
    angles.gammas.assign(x.begin() + p, x.begin() + 2 * p);
    return angles;
}

inline int argmax_probability(const std::vector<double>& probs) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(probs.size()); ++i)
        if (probs[static_cast<std::size_t>(i)] > probs[static_cast<std::size_t>(best)]) best = i;
    return best;  // ties keep the smallest binary value
}

}  // namespace detail

// Outer variational loop: draw starting angles uniformly from the bounds box
// with a seeded SplitMix64 (betas first, then gammas), then run bounded
// Nelder-Mead descent on the circuit expectation. Deterministic per
// (config, seed); budget exhaustion is normal termination.
inline RunRecord optimize(const QaoaConfig& config, const CostTable& cost,
                          const StrategyTable& table) {
    validate_config(config, table);
    if (config.p < 1) throw ValidationError("optimization requires at least one layer");
    const int p = config.p;
    const int budget = config.max_evals > 0 ? config.max_evals : 200 * p;

    SplitMix64 rng(config.seed);
    std::vector<double> x0;
    std::vector<double> lower(static_cast<std::size_t>(2 * p), 0.0);
    std::vector<double> upper;
    for (int i = 0; i < p; ++i) x0.push_back(rng.next_double() * std::numbers::pi);
    for (int i = 0; i < p; ++i) x0.push_back(rng.next_double() * 2.0 * std::numbers::pi);
    for (int i = 0; i < p; ++i) upper.push_back(std::numbers::pi);
    for (int i = 0; i < p; ++i) upper.push_back(2.0 * std::numbers::pi);

    auto objective = [&](const std::vector<double>& x) {
        StateVector sv = run_circuit(config, detail::unpack_angles(x, p), cost, table);
        return expectation(sv, cost);
    };

    // Restarted descent: each round rebuilds a wide simplex around the best
    // point so far, so a converged round keeps exploring its neighborhood
    // until the budget runs out or a whole round stops paying off.
    MinimizeResult min;
    std::vector<double> start = std::move(x0);
    while (min.evals < budget) {
        MinimizeResult round =
            nelder_mead(objective, start, lower, upper, budget - min.evals, 1e-6);
        for (const auto& [index, value] : round.trace)
            min.trace.emplace_back(index + min.evals, value);
        const bool improved = min.best_x.empty() || round.best_f < min.best_f - 1e-6;
        if (min.best_x.empty() || round.best_f < min.best_f) {
            min.best_f = round.best_f;
            min.best_x = round.best_x;
        }
        min.evals += round.evals;
        if (!improved) break;
        start = min.best_x;
    }

    RunRecord record;
    record.config = config;
    record.best_angles = detail::unpack_angles(min.best_x, p);
    record.best_expectation = min.best_f;
    StateVector final_state = run_circuit(config, record.best_angles, cost, table);
    record.final_probabilities = probabilities(final_state);
    record.most_probable =
        Assignment{table.spins(),
                   static_cast<std::uint64_t>(detail::argmax_probability(record.final_probabilities))};
    record.eval_trace = std::move(min.trace);
    return record;
}

// Cost-ordered cumulative measurement probability (ties broken by binary
// value), the data behind cumulative-solution-probability curves.
struct CumulativeRow {
    int rank = 0;  // 1-based
    double cost = 0.0;
    double cum_prob = 0.0;
    bool feasible = false;
};

inline std::vector<CumulativeRow> cumulative_distribution(const CostTable& cost,
                                                          const std::vector<double>& probs,
                                                          const StrategyTable& table) {
    if (probs.size() != cost.values.size())
        throw ValidationError("probability vector does not match cost table");
    std::vector<std::size_t> order(probs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return cost.values[a] < cost.values[b];
    });
    std::vector<CumulativeRow> rows;
    rows.reserve(order.size());
    double acc = 0.0;
    for (std::size_t r = 0; r < order.size(); ++r) {
        acc += probs[order[r]];
        rows.push_back(CumulativeRow{static_cast<int>(r) + 1, cost.values[order[r]], acc,
                                     table.feasible_word(order[r])});
    }
    return rows;
}

struct SweepOptions {
    std::vector<int> p_list;
    int seeds = 10;
    std::uint64_t seed_base = 1;
    int max_evals = 0;
    std::optional<double> premix_beta0;  // hard variant only
    bool randomize_initial = false;      // hard variant only; per-seed start state
};

struct SweepCell {
    int p = 0;
    std::uint64_t seed = 0;
    double best_expectation = 0.0;
    Assignment most_probable;
    bool is_optimal = false;
    double p_optimal_state = 0.0;  // final probability of the oracle optimum
};

struct SweepReport {
    SolutionRow oracle_optimum;
    CostTable cost;
    std::vector<SweepCell> cells;                    // (p, seed) lexicographic
    std::vector<std::pair<int, int>> success_by_p;   // (p, optimal-most-probable count)
    std::vector<std::pair<int, std::vector<double>>> mean_probabilities_by_p;
};

namespace detail {

// Stream-splitting constant keeps the start-state draw independent of the
// angle draw that consumes the seed itself.
inline constexpr std::uint64_t kInitialBitsSalt = 0x517cc1b727220a95ULL;

inline std::vector<int> random_one_hot_bits(const StrategyTable& table, std::uint64_t seed) {
    SplitMix64 rng(seed + kInitialBitsSalt);
    std::vector<int> bits(static_cast<std::size_t>(table.spins()), 0);
    for (int i = 0; i < table.num_players(); ++i) {
        int choice = static_cast<int>(rng.below(static_cast<std::uint64_t>(table.block_size(i))));
        bits[static_cast<std::size_t>(table.var_index(i, choice))] = 1;
    }
    return bits;
}

}  // namespace detail

// Multi-p, multi-seed experiment against the brute-force optimum. Each
// (p, seed) cell is an independent optimize run; seeds are
// seed_base .. seed_base + seeds - 1 and cells are reported in (p, seed)
// lexicographic order following p_list.
inline SweepReport sweep(const Game& game, const StrategyTable& table, Objective objective,
                         const ConstraintMode& mode, const SweepOptions& options) {
    if (options.p_list.empty()) throw ValidationError("sweep requires at least one layer count");
    for (int p : options.p_list)
        if (p < 1) throw ValidationError("sweep layer counts must be positive");
    if (options.seeds < 1) throw ValidationError("sweep requires at least one seed");

    SweepReport report;
    auto rows = evaluate_all(game, table);
    report.oracle_optimum = optimum(rows, objective);
    report.cost = make_cost_table(assemble(objective, mode, game, table));

    const Variant variant =
        mode.kind == ConstraintMode::Kind::Hard ? Variant::HardParity : Variant::SoftX;
    for (int p : options.p_list) {
        int successes = 0;
        std::vector<double> mean_probs(report.cost.values.size(), 0.0);
        for (int k = 0; k < options.seeds; ++k) {
            QaoaConfig config;
            config.variant = variant;
            config.p = p;
            config.seed = options.seed_base + static_cast<std::uint64_t>(k);
            config.max_evals = options.max_evals;
            if (variant == Variant::HardParity) {
                config.premix_beta0 = options.premix_beta0;
                if (options.randomize_initial)
                    config.initial_bits = detail::random_one_hot_bits(table, config.seed);
            } else if (options.premix_beta0 || options.randomize_initial) {
                throw ValidationError("premix and initial-state options require hard mode");
            }
            RunRecord record = optimize(config, report.cost, table);

            SweepCell cell;
            cell.p = p;
            cell.seed = config.seed;
            cell.best_expectation = record.best_expectation;
            cell.most_probable = record.most_probable;
            cell.is_optimal =
                record.most_probable.word == report.oracle_optimum.assignment.word;
            cell.p_optimal_state =
                record.final_probabilities[static_cast<std::size_t>(
                    report.oracle_optimum.assignment.word)];
            if (cell.is_optimal) ++successes;
            for (std::size_t z = 0; z < mean_probs.size(); ++z)
                mean_probs[z] += record.final_probabilities[z];
            report.cells.push_back(cell);
        }
        for (double& v : mean_probs) v /= static_cast<double>(options.seeds);
        report.success_by_p.emplace_back(p, successes);
        report.mean_probabilities_by_p.emplace_back(p, std::move(mean_probs));
    }
    return report;
}

}  // namespace congame
