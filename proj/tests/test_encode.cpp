#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "congame/encode.hpp"
#include "congame/oracle.hpp"
#include "test_util.hpp"

using namespace congame;

namespace {

// Direct textbook formulas, written independently of the compiler.
double direct_social(const Game& game, const StrategyTable& table, std::uint64_t word) {
    double total = 0.0;
    auto counts = detail::occupation_counts(game, table, word);
    for (int k = 0; k < game.num_resources(); ++k)
        total += counts[static_cast<std::size_t>(k)]
                 * game.delay(k, counts[static_cast<std::size_t>(k)]);
    return total;
}

double direct_nash(const Game& game, const StrategyTable& table, std::uint64_t word) {
    double total = 0.0;
    auto counts = detail::occupation_counts(game, table, word);
    for (int k = 0; k < game.num_resources(); ++k)
        for (int j = 1; j <= counts[static_cast<std::size_t>(k)]; ++j)
            total += game.delay(k, j);
    return total;
}

double direct_penalty(const StrategyTable& table, std::uint64_t word, double a) {
    double total = 0.0;
    for (int i = 0; i < table.num_players(); ++i) {
        int selected = 0;
        for (int j = 0; j < table.block_size(i); ++j)
            selected += static_cast<int>((word >> table.var_index(i, j)) & 1);
        double sum_spins = 2.0 * selected - table.block_size(i);
        double term = sum_spins + table.block_size(i) - 2;
        total += a * term * term;
    }
    return total;
}

Game one_edge_game(int players, double a, double b) {
    Game game;
    game.nodes = {"A", "B"};
    game.edges.push_back({0, "A", "B", a, b});
    for (int i = 0; i < players; ++i) game.players.push_back({i, "A", "B"});
    return game;
}

}  // namespace

TEST_CASE("spin and bit conversions") {
    REQUIRE(spin_of(0) == -1);
    REQUIRE(spin_of(1) == 1);
    REQUIRE(bit_of(-1) == 0);
    REQUIRE(bit_of(1) == 1);
}

TEST_CASE("affine spin expressions merge terms and evaluate") {
    AffineSpinExpr expr;
    expr.constant = 1.0;
    expr.add_term(3, 0.5);
    expr.add_term(1, 0.25);
    expr.add_term(3, 0.5);  // merges with the existing variable-3 term
    REQUIRE(expr.terms.size() == 2);
    REQUIRE(expr.terms[0].first == 1);
    REQUIRE(expr.terms[1].second == Catch::Approx(1.0));
    // word 0b1000: spin 3 is +1, spin 1 is -1.
    REQUIRE(expr.eval_bits(0b1000) == Catch::Approx(1.0 - 0.25 + 1.0));
    REQUIRE(expr.eval_bits(0) == Catch::Approx(1.0 - 0.25 - 1.0));
}

TEST_CASE("congestion terms describe per-edge occupation") {
    Game game = test_util::bundled_game();
    StrategyTable table = enumerate_paths(game);

    // Edge 5 (X->V) lies on player 0 path 2 (var 2) and player 1 path 0 (var 4).
    AffineSpinExpr edge5 = congestion_terms(table, 5);
    REQUIRE(edge5.constant == Catch::Approx(1.0));
    REQUIRE(edge5.terms
            == std::vector<std::pair<int, double>>{{2, 0.5}, {4, 0.5}});
    REQUIRE(edge5.eval_bits(0b010100) == Catch::Approx(2.0));  // both selected
    REQUIRE(edge5.eval_bits(0) == Catch::Approx(0.0));
    REQUIRE(edge5.eval_bits(0b000100) == Catch::Approx(1.0));

    // Edge 0 (S1->U) belongs to player 0 paths 0 and 1 only.
    AffineSpinExpr edge0 = congestion_terms(table, 0);
    REQUIRE(edge0.terms
            == std::vector<std::pair<int, double>>{{0, 0.5}, {1, 0.5}});
}

TEST_CASE("social compiler on a one-edge game") {
    Game game = one_edge_game(1, 1.0, 1.0);
    StrategyTable table = enumerate_paths(game);
    SpinPolynomial poly = compile_social(game, table);
    // Selected: n = 1, cost = n * (1 + n) = 2. Empty: 0.
    REQUIRE(poly.eval_bits(1) == Catch::Approx(2.0));
    REQUIRE(poly.eval_bits(0) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("nash compiler yields the potential, not the social cost") {
    Game game = one_edge_game(2, 1.0, 2.0);
    StrategyTable table = enumerate_paths(game);
    SpinPolynomial nash = compile_nash(game, table);
    SpinPolynomial social = compile_social(game, table);
    // Both players on the edge: d(1) + d(2) = 3 + 5 = 8, while social is
    // 2 * d(2) = 10.
    REQUIRE(nash.eval_bits(0b11) == Catch::Approx(8.0));
    REQUIRE(social.eval_bits(0b11) == Catch::Approx(10.0));
    REQUIRE(nash.eval_bits(0b01) == Catch::Approx(3.0));
    REQUIRE(nash.eval_bits(0) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("path penalty vanishes exactly on feasible assignments") {
    Game game = test_util::bundled_game();
    StrategyTable table = enumerate_paths(game);
    SpinPolynomial penalty = compile_path_penalty(table, 10.0);

    auto rows = evaluate_all(game, table);
    for (const SolutionRow& row : rows) {
        double v = penalty.eval_bits(row.assignment.word);
        if (row.feasible)
            REQUIRE(v == Catch::Approx(0.0).margin(1e-9));
        else
            REQUIRE(v > 0.5);
    }
    // Nothing selected: each register contributes 4 * (0 - 1)^2 * A.
    REQUIRE(penalty.eval_bits(0) == Catch::Approx(80.0));
    // One player doubled up: 4 * (2 - 1)^2 * A from that register alone.
    REQUIRE(penalty.eval_bits(0b010011) == Catch::Approx(40.0));

    REQUIRE_THROWS_AS(compile_path_penalty(table, 0.0), ValidationError);
    REQUIRE_THROWS_AS(compile_path_penalty(table, -3.0), ValidationError);
}

TEST_CASE("automatic penalty weight exceeds the objective range") {
    SpinPolynomial zero(3);
    REQUIRE(auto_penalty(zero) == Catch::Approx(1.0));

    SpinPolynomial linear(1);
    linear.add_linear(0, 4.3);
    REQUIRE(auto_penalty(linear) == Catch::Approx(9.6));

    Game game = test_util::bundled_game();
    StrategyTable table = enumerate_paths(game);
    REQUIRE(auto_penalty(compile_nash(game, table)) == Catch::Approx(9.4));
    REQUIRE(auto_penalty(compile_social(game, table)) == Catch::Approx(10.6));
}

TEST_CASE("soft assembly separates infeasible from feasible costs") {
    Game game = test_util::bundled_game();
    StrategyTable table = enumerate_paths(game);
    for (Objective objective : {Objective::Social, Objective::Nash}) {
        SpinPolynomial bare = objective == Objective::Social ? compile_social(game, table)
                                                             : compile_nash(game, table);
        SpinPolynomial soft =
            assemble(objective, ConstraintMode::soft(auto_penalty(bare)), game, table);
        double max_feasible = -1e300, min_infeasible = 1e300;
        for (std::uint64_t w = 0; w < 64; ++w) {
            double v = soft.eval_bits(w);
            if (table.feasible_word(w))
                max_feasible = std::max(max_feasible, v);
            else
                min_infeasible = std::min(min_infeasible, v);
        }
        REQUIRE(min_infeasible > max_feasible);
    }
}

TEST_CASE("hard assembly is the bare objective") {
    Game game = test_util::bundled_game();
    StrategyTable table = enumerate_paths(game);
    SpinPolynomial bare = compile_nash(game, table);
    SpinPolynomial hard = assemble(Objective::Nash, ConstraintMode::hard(), game, table);
    REQUIRE(hard.constant() == Catch::Approx(bare.constant()));
    for (int i = 0; i < 6; ++i) {
        REQUIRE(hard.bias(i) == Catch::Approx(bare.bias(i)));
        for (int j = i + 1; j < 6; ++j)
            REQUIRE(hard.coupling(i, j) == Catch::Approx(bare.coupling(i, j)));
    }
}

TEST_CASE("structurally identical paths get identical coefficients") {
    Game game;
    game.nodes = {"A", "M1", "M2", "B"};
    game.edges.push_back({0, "A", "M1", 0.3, 0.2});
    game.edges.push_back({1, "A", "M2", 0.3, 0.2});
    game.edges.push_back({2, "M1", "B", 0.1, 0.4});
    game.edges.push_back({3, "M2", "B", 0.1, 0.4});
    game.players.push_back({0, "A", "B"});
    StrategyTable table = enumerate_paths(game);
    REQUIRE(table.spins() == 2);
    for (Objective objective : {Objective::Social, Objective::Nash}) {
        SpinPolynomial poly = assemble(objective, ConstraintMode::hard(), game, table);
        REQUIRE(poly.bias(0) == Catch::Approx(poly.bias(1)));
    }
}

TEST_CASE("compiled polynomials match direct formulas on the corpus") {
    auto games = test_util::corpus(20);
    games.push_back(test_util::bundled_game());
    for (const Game& game : games) {
        StrategyTable table = enumerate_paths(game);
        SpinPolynomial social = compile_social(game, table);
        SpinPolynomial nash = compile_nash(game, table);
        SpinPolynomial penalty = compile_path_penalty(table, 7.25);
        const std::uint64_t limit = std::uint64_t{1} << table.spins();
        for (std::uint64_t w = 0; w < limit; ++w) {
            REQUIRE_THAT(social.eval_bits(w),
                         Catch::Matchers::WithinAbs(direct_social(game, table, w), 1e-9));
            REQUIRE_THAT(nash.eval_bits(w),
                         Catch::Matchers::WithinAbs(direct_nash(game, table, w), 1e-9));
            REQUIRE_THAT(penalty.eval_bits(w),
                         Catch::Matchers::WithinAbs(direct_penalty(table, w, 7.25), 1e-9));
        }
    }
}

TEST_CASE("coupling counts respect the quadratic term bounds") {
    auto games = test_util::corpus(20);
    games.push_back(test_util::bundled_game());
    for (const Game& game : games) {
        StrategyTable table = enumerate_paths(game);
        int p_max = 0;
        for (int i = 0; i < table.num_players(); ++i) p_max = std::max(p_max, table.block_size(i));
        const int n = table.num_players();
        const int r = game.num_resources();
        const int objective_bound = r * (n * p_max) * (n * p_max);
        const int penalty_bound = n * p_max * p_max;
        REQUIRE(compile_social(game, table).coupling_nonzeros() <= objective_bound);
        REQUIRE(compile_nash(game, table).coupling_nonzeros() <= objective_bound);
        REQUIRE(compile_path_penalty(table, 1.0).coupling_nonzeros() <= penalty_bound);
    }
}

TEST_CASE("ising export is deterministic and minimal") {
    SpinPolynomial poly(3);
    poly.add_constant(1.5);
    poly.add_linear(0, -0.25);
    poly.add_quadratic(0, 2, 0.75);
    std::ostringstream out;
    write_ising(poly, out);
    REQUIRE(out.str() == "{\n"
                         "  \"n\": 3,\n"
                         "  \"c\": 1.5,\n"
                         "  \"h\": [-0.25, 0, 0],\n"
                         "  \"J\": [\n"
                         "    {\"i\": 0, \"j\": 2, \"v\": 0.75}\n"
                         "  ]\n"
                         "}\n");

    SpinPolynomial diagonal(2);
    diagonal.add_linear(1, 2.0);
    std::ostringstream flat;
    write_ising(diagonal, flat);
    REQUIRE(flat.str() == "{\n"
                          "  \"n\": 2,\n"
                          "  \"c\": 0,\n"
                          "  \"h\": [0, 2],\n"
                          "  \"J\": []\n"
                          "}\n");
}

TEST_CASE("spin polynomial algebra") {
    SpinPolynomial poly(2);
    poly.add_quadratic(1, 0, 3.0);            // swapped indices fold to (0, 1)
    REQUIRE(poly.coupling(0, 1) == Catch::Approx(3.0));
    poly.add_quadratic(1, 1, 4.0);            // s^2 = 1 folds into the constant
    REQUIRE(poly.constant() == Catch::Approx(4.0));
    REQUIRE(poly.eval_bits(0b11) == Catch::Approx(7.0));
    REQUIRE(poly.eval_bits(0b01) == Catch::Approx(1.0));

    auto values = poly.values_over_assignments();
    REQUIRE(values.size() == 4);
    for (std::uint64_t w = 0; w < 4; ++w)
        REQUIRE(values[w] == Catch::Approx(poly.eval_bits(w)));

    std::vector<int> spins{-1, 1};
    REQUIRE(poly.eval_spins(spins) == Catch::Approx(poly.eval_bits(0b10)));

    SpinPolynomial other(3);
    REQUIRE_THROWS_AS(poly.add(other), ValidationError);
}
