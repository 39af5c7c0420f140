#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "congame/encode.hpp"
#include "congame/errors.hpp"
#include "congame/game.hpp"
#include "congame/oracle.hpp"
#include "congame/qaoa.hpp"
#include "congame/textio.hpp"

namespace congame {

namespace detail {

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

struct LoadedGame {
    Game game;
    StrategyTable table;
};

inline LoadedGame load_game_file(const std::string& path) {
    Game game = load_game(read_text_file(path));
    StrategyTable table = enumerate_paths(game);
    return {std::move(game), std::move(table)};
}

inline Objective objective_from_name(const std::string& name) {
    return name == "social" ? Objective::Social : Objective::Nash;
}

inline std::string join_nodes(const Path& path) {
    std::string s;
    for (std::size_t i = 0; i < path.node_seq.size(); ++i) {
        if (i) s += '-';
        s += path.node_seq[i];
    }
    return s;
}

// "auto" resolves to the exhaustive-scan penalty for the given objective;
// anything else must parse fully as a real number.
inline double resolve_penalty(const std::string& text, const SpinPolynomial& objective_poly) {
    if (text == "auto") return auto_penalty(objective_poly);
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size()) throw CLI::ValidationError("--penalty", "expected 'auto' or a real number");
    return value;
}

// Checks flag combinations before any computation; returns the constraint
// mode with the soft penalty already resolved.
inline ConstraintMode resolve_mode(const std::string& mode_name, const std::string& penalty_text,
                                   bool penalty_given, Objective objective, const Game& game,
                                   const StrategyTable& table) {
    if (mode_name == "hard") {
        if (penalty_given)
            throw CLI::ValidationError("--penalty", "only applies to soft mode");
        return ConstraintMode::hard();
    }
    SpinPolynomial objective_poly = objective == Objective::Social
                                        ? compile_social(game, table)
                                        : compile_nash(game, table);
    return ConstraintMode::soft(resolve_penalty(penalty_text, objective_poly));
}

inline void write_heatmap_csv(const HeatmapResult& grid, std::ostream& out) {
    out << "beta,gamma,expectation\n";
    for (int i = 0; i < grid.grid; ++i)
        for (int j = 0; j < grid.grid; ++j)
            out << real12(grid.betas[static_cast<std::size_t>(i)]) << ','
                << real12(grid.gammas[static_cast<std::size_t>(j)]) << ','
                << real12(grid.at(i, j)) << '\n';
}

inline void write_seed_csv(const SweepReport& report, std::ostream& out) {
    out << "seed,best_expectation,most_probable_bits,is_optimal,p_optimal_state\n";
    for (const SweepCell& cell : report.cells)
        out << cell.seed << ',' << real12(cell.best_expectation) << ','
            << cell.most_probable.to_string() << ',' << (cell.is_optimal ? 1 : 0) << ','
            << real12(cell.p_optimal_state) << '\n';
}

inline void write_cumulative_csv(const CostTable& cost, const std::vector<double>& probs,
                                 const StrategyTable& table, std::ostream& out) {
    out << "rank,cost,cum_prob,feasible\n";
    for (const CumulativeRow& row : cumulative_distribution(cost, probs, table))
        out << row.rank << ',' << real12(row.cost) << ',' << real12(row.cum_prob) << ','
            << (row.feasible ? 1 : 0) << '\n';
}

inline void write_sweep_summary_csv(const SweepReport& report, std::ostream& out) {
    out << "p,seed_count,success_count\n";
    int seeds = 0;  // identical for every p: cells are grouped per p
    if (!report.success_by_p.empty())
        seeds = static_cast<int>(report.cells.size() / report.success_by_p.size());
    for (const auto& [p, successes] : report.success_by_p)
        out << p << ',' << seeds << ',' << successes << '\n';
}

inline std::ofstream open_output_file(const std::filesystem::path& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw ParseError("cannot open file for writing: " + path.string());
    return file;
}

}  // namespace detail

// Full command-line surface. Returns the process exit status: 0 success,
// 1 usage error, 2 domain error (bad input data, infeasible model, ...).
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Congestion-game QAOA toolkit: path enumeration, spin-model "
                 "compilation, exact simulation, and brute-force ground truth"};
    app.name("congame");
    app.require_subcommand(1);

    std::string game_file;
    std::string objective_name = "nash";
    std::string mode_name = "hard";
    std::string penalty_text = "auto";
    std::string csv_path;
    std::string out_path;
    int grid = 64;
    int p = 1;
    std::vector<int> p_list;
    int seeds = 1;
    std::uint64_t seed_base = 1;
    int max_evals = 0;
    double premix = 0.0;
    bool randomize_initial = false;

    auto add_game = [&](CLI::App* cmd) {
        cmd->add_option("game", game_file, "game description file (JSON)")->required();
    };
    auto add_objective = [&](CLI::App* cmd) {
        cmd->add_option("--objective", objective_name, "cost to minimize")
            ->check(CLI::IsMember({"social", "nash"}))
            ->required();
    };
    auto add_mode = [&](CLI::App* cmd) {
        cmd->add_option("--mode", mode_name, "constraint handling")
            ->check(CLI::IsMember({"soft", "hard"}))
            ->required();
    };

    CLI::App* cmd_paths = app.add_subcommand("paths", "enumerate per-player simple paths");
    add_game(cmd_paths);

    CLI::App* cmd_brute = app.add_subcommand("brute", "brute-force the full solution table");
    add_game(cmd_brute);
    add_objective(cmd_brute);
    cmd_brute->add_option("--csv", csv_path, "write the solution table to this file");

    CLI::App* cmd_compile = app.add_subcommand("compile", "compile the spin model and export it");
    add_game(cmd_compile);
    add_objective(cmd_compile);
    add_mode(cmd_compile);
    CLI::Option* opt_penalty =
        cmd_compile->add_option("--penalty", penalty_text, "soft-constraint weight: auto or a real");
    cmd_compile->add_option("--out", out_path, "write the model to this file");

    CLI::App* cmd_heatmap = app.add_subcommand("heatmap", "p=1 expectation grid over (beta, gamma)");
    add_game(cmd_heatmap);
    add_objective(cmd_heatmap);
    add_mode(cmd_heatmap);
    cmd_heatmap->add_option("--grid", grid, "grid resolution per axis");
    CLI::Option* opt_heatmap_premix =
        cmd_heatmap->add_option("--premix", premix, "pre-mixing angle (hard mode only)");
    cmd_heatmap->add_option("--out", out_path, "write the grid CSV to this file");

    CLI::App* cmd_solve = app.add_subcommand("solve", "optimize QAOA angles at a fixed depth");
    add_game(cmd_solve);
    add_objective(cmd_solve);
    add_mode(cmd_solve);
    cmd_solve->add_option("--p", p, "layer count")->required();
    cmd_solve->add_option("--seeds", seeds, "number of independent runs");
    cmd_solve->add_option("--seed-base", seed_base, "first seed value");
    cmd_solve->add_option("--max-evals", max_evals, "objective evaluation budget (0 = 200*p)");
    CLI::Option* opt_solve_premix =
        cmd_solve->add_option("--premix", premix, "pre-mixing angle (hard mode only)");
    cmd_solve->add_flag("--randomize-initial", randomize_initial,
                        "draw the start state per seed (hard mode only)");
    cmd_solve->add_option("--out", out_path, "write seeds.csv and cumulative.csv to this directory");

    CLI::App* cmd_sweep = app.add_subcommand("sweep", "multi-p success-count experiment");
    add_game(cmd_sweep);
    add_objective(cmd_sweep);
    add_mode(cmd_sweep);
    cmd_sweep->add_option("--p-list", p_list, "comma-separated layer counts")
        ->delimiter(',')
        ->required();
    cmd_sweep->add_option("--seeds", seeds, "number of independent runs per p")->required();
    cmd_sweep->add_option("--out", out_path, "write summary.csv and per-p cumulative CSVs here");

    std::vector<const char*> argv;
    argv.push_back("congame");
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());

        if (cmd_paths->parsed()) {
            auto [game, table] = detail::load_game_file(game_file);
            std::string path_counts;
            for (int i = 0; i < table.num_players(); ++i) {
                const Player& player = game.players[static_cast<std::size_t>(i)];
                const auto& paths = table.paths_per_player[static_cast<std::size_t>(i)];
                out << "player " << i << ": " << player.origin << " -> " << player.dest << " ("
                    << paths.size() << (paths.size() == 1 ? " path)\n" : " paths)\n");
                for (int j = 0; j < static_cast<int>(paths.size()); ++j)
                    out << "  [" << table.var_index(i, j) << "] "
                        << detail::join_nodes(paths[static_cast<std::size_t>(j)]) << '\n';
                if (i) path_counts += ',';
                path_counts += std::to_string(paths.size());
            }
            out << "players=" << table.num_players() << " paths=" << path_counts
                << " spins=" << table.spins() << '\n';
            return 0;
        }

        if (cmd_brute->parsed()) {
            auto [game, table] = detail::load_game_file(game_file);
            Objective objective = detail::objective_from_name(objective_name);
            auto rows = evaluate_all(game, table);
            if (!csv_path.empty()) {
                auto file = detail::open_output_file(csv_path);
                write_solution_csv(rows, file);
            } else {
                write_solution_csv(rows, out);
            }
            const SolutionRow& best = optimum(rows, objective);
            NashCertificate certificate = verify_nash(game, table, best);
            std::size_t feasible = 0;
            for (const SolutionRow& row : rows) feasible += row.feasible ? 1 : 0;
            out << "solutions=" << rows.size() << " feasible=" << feasible << '\n';
            out << "objective=" << to_string(objective) << " optimum_bits="
                << best.assignment.to_string() << " optimum_cost="
                << real12(objective == Objective::Social ? best.social_cost : best.nash_cost)
                << " combined_utility=" << real12(best.combined_utility)
                << " is_nash=" << (certificate.is_nash ? 1 : 0) << '\n';
            return 0;
        }

        if (cmd_compile->parsed()) {
            auto [game, table] = detail::load_game_file(game_file);
            Objective objective = detail::objective_from_name(objective_name);
            ConstraintMode mode =
                detail::resolve_mode(mode_name, penalty_text, opt_penalty->count() > 0, objective,
                                     game, table);
            SpinPolynomial poly = assemble(objective, mode, game, table);
            if (!out_path.empty()) {
                auto file = detail::open_output_file(out_path);
                write_ising(poly, file);
            } else {
                write_ising(poly, out);
            }
            return 0;
        }

        if (cmd_heatmap->parsed()) {
            if (opt_heatmap_premix->count() > 0 && mode_name != "hard")
                throw CLI::ValidationError("--premix", "requires hard mode");
            auto [game, table] = detail::load_game_file(game_file);
            Objective objective = detail::objective_from_name(objective_name);
            ConstraintMode mode =
                detail::resolve_mode(mode_name, "auto", false, objective, game, table);
            CostTable cost = make_cost_table(assemble(objective, mode, game, table));
            QaoaConfig config;
            config.variant = mode_name == "hard" ? Variant::HardParity : Variant::SoftX;
            config.p = 1;
            if (opt_heatmap_premix->count() > 0) config.premix_beta0 = premix;
            HeatmapResult result = heatmap(config, cost, table, grid);
            if (!out_path.empty()) {
                auto file = detail::open_output_file(out_path);
                detail::write_heatmap_csv(result, file);
            } else {
                detail::write_heatmap_csv(result, out);
            }
            return 0;
        }

        if (cmd_solve->parsed() || cmd_sweep->parsed()) {
            const bool is_solve = cmd_solve->parsed();
            if (is_solve && mode_name != "hard") {
                if (opt_solve_premix->count() > 0)
                    throw CLI::ValidationError("--premix", "requires hard mode");
                if (randomize_initial)
                    throw CLI::ValidationError("--randomize-initial", "requires hard mode");
            }
            auto [game, table] = detail::load_game_file(game_file);
            Objective objective = detail::objective_from_name(objective_name);
            ConstraintMode mode =
                detail::resolve_mode(mode_name, "auto", false, objective, game, table);

            SweepOptions options;
            options.p_list = is_solve ? std::vector<int>{p} : p_list;
            options.seeds = seeds;
            options.seed_base = seed_base;
            options.max_evals = max_evals;
            if (is_solve) {
                if (opt_solve_premix->count() > 0) options.premix_beta0 = premix;
                options.randomize_initial = randomize_initial;
            }
            SweepReport report = sweep(game, table, objective, mode, options);

            if (is_solve) {
                const auto& mean_probs = report.mean_probabilities_by_p.front().second;
                if (!out_path.empty()) {
                    std::filesystem::create_directories(out_path);
                    auto seeds_file =
                        detail::open_output_file(std::filesystem::path(out_path) / "seeds.csv");
                    detail::write_seed_csv(report, seeds_file);
                    auto cumulative_file = detail::open_output_file(
                        std::filesystem::path(out_path) / "cumulative.csv");
                    detail::write_cumulative_csv(report.cost, mean_probs, table, cumulative_file);
                } else {
                    detail::write_seed_csv(report, out);
                    out << '\n';
                    detail::write_cumulative_csv(report.cost, mean_probs, table, out);
                    out << '\n';
                }
                int successes = report.success_by_p.front().second;
                out << "objective=" << to_string(objective) << " mode=" << mode_name << " p=" << p
                    << " seeds=" << seeds << " successes=" << successes
                    << " oracle_bits=" << report.oracle_optimum.assignment.to_string()
                    << " oracle_cost="
                    << real12(objective == Objective::Social ? report.oracle_optimum.social_cost
                                                             : report.oracle_optimum.nash_cost)
                    << '\n';
            } else {
                if (!out_path.empty()) {
                    std::filesystem::create_directories(out_path);
                    auto summary_file =
                        detail::open_output_file(std::filesystem::path(out_path) / "summary.csv");
                    detail::write_sweep_summary_csv(report, summary_file);
                    for (const auto& [pv, probs] : report.mean_probabilities_by_p) {
                        auto file = detail::open_output_file(
                            std::filesystem::path(out_path)
                            / ("cumulative_p" + std::to_string(pv) + ".csv"));
                        detail::write_cumulative_csv(report.cost, probs, table, file);
                    }
                } else {
                    detail::write_sweep_summary_csv(report, out);
                }
            }
            return 0;
        }
        return 0;
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace congame
