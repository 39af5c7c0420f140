#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "congame/errors.hpp"

namespace congame {

// A directed network congestion game. Resources are the directed edges; each
// edge delays every player on it by a + b * (number of players using it).

struct Edge {
    int id = 0;  // dense 0..r-1, assigned by file position
    std::string from;
    std::string to;
    double a = 0.0;  // delay intercept
    double b = 0.0;  // delay slope per player, non-negative
};

struct Player {
    int id = 0;  // dense 0..n-1, assigned by file position
    std::string origin;
    std::string dest;
};

struct Game {
    std::vector<std::string> nodes;
    std::vector<Edge> edges;
    std::vector<Player> players;

    int num_resources() const { return static_cast<int>(edges.size()); }
    int num_players() const { return static_cast<int>(players.size()); }

    // Delay of resource k when x players use it.
    double delay(int k, int x) const {
        const Edge& e = edges[static_cast<std::size_t>(k)];
        return e.a + e.b * x;
    }
};

// A simple directed path; edge_ids[t] connects node_seq[t] to node_seq[t+1].
struct Path {
    std::vector<std::string> node_seq;
    std::vector<int> edge_ids;
};

// Per-player enumerated strategy spaces plus the flat spin-variable index map.
// Variable (player i, path j) lives at block_start[i] + j; paths are sorted
// lexicographically by node sequence so the numbering is reproducible.
struct StrategyTable {
    std::vector<std::vector<Path>> paths_per_player;
    std::vector<int> block_start;  // size n+1, block_start[n] == total spins

    int num_players() const { return static_cast<int>(paths_per_player.size()); }
    int spins() const { return block_start.back(); }
    int block_size(int player) const {
        return block_start[static_cast<std::size_t>(player) + 1]
               - block_start[static_cast<std::size_t>(player)];
    }
    int var_index(int player, int path) const {
        return block_start[static_cast<std::size_t>(player)] + path;
    }
    // Inverse of var_index.
    std::pair<int, int> owner(int var) const {
        int player = 0;
        while (block_start[static_cast<std::size_t>(player) + 1] <= var) ++player;
        return {player, var - block_start[static_cast<std::size_t>(player)]};
    }
    const Path& path_of_var(int var) const {
        auto [player, path] = owner(var);
        return paths_per_player[static_cast<std::size_t>(player)][static_cast<std::size_t>(path)];
    }
    // One-hot per player: bit block_start[i] set, everything else clear.
    std::uint64_t first_choice_word() const {
        std::uint64_t w = 0;
        for (int i = 0; i < num_players(); ++i)
            w |= std::uint64_t{1} << block_start[static_cast<std::size_t>(i)];
        return w;
    }
    // Exactly one selected path per player.
    bool feasible_word(std::uint64_t word) const {
        for (int i = 0; i < num_players(); ++i) {
            std::uint64_t block = (word >> block_start[static_cast<std::size_t>(i)])
                                  & ((std::uint64_t{1} << block_size(i)) - 1);
            if (std::popcount(block) != 1) return false;
        }
        return true;
    }
};

namespace detail {

inline const nlohmann::json& member(const nlohmann::json& j, const char* key,
                                    const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(where + ": missing field \"" + key + "\"");
    return *it;
}

inline std::string string_member(const nlohmann::json& j, const char* key,
                                 const std::string& where) {
    const auto& v = member(j, key, where);
    if (!v.is_string()) throw ParseError(where + ": field \"" + key + "\" must be a string");
    return v.get<std::string>();
}

inline double number_member(const nlohmann::json& j, const char* key, const std::string& where) {
    const auto& v = member(j, key, where);
    if (!v.is_number()) throw ParseError(where + ": field \"" + key + "\" must be a number");
    return v.get<double>();
}

}  // namespace detail

// Parses and validates a game file (UTF-8 JSON text; see README for the
// schema). Ordering of nodes, edges and players is preserved from the file;
// ids are positional.
inline Game load_game(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.what());  // nlohmann reports line and column
    }
    if (!doc.is_object()) throw ParseError("game file: top level must be an object");

    Game game;
    const auto& nodes = detail::member(doc, "nodes", "game file");
    if (!nodes.is_array()) throw ParseError("game file: \"nodes\" must be an array");
    std::set<std::string> seen;
    for (const auto& n : nodes) {
        if (!n.is_string()) throw ParseError("game file: node names must be strings");
        std::string name = n.get<std::string>();
        if (!seen.insert(name).second)
            throw ValidationError("duplicate node \"" + name + "\"");
        game.nodes.push_back(std::move(name));
    }

    const auto& edges = detail::member(doc, "edges", "game file");
    if (!edges.is_array()) throw ParseError("game file: \"edges\" must be an array");
    std::set<std::pair<std::string, std::string>> pairs;
    for (std::size_t idx = 0; idx < edges.size(); ++idx) {
        const std::string where = "edges[" + std::to_string(idx) + "]";
        const auto& ej = edges[idx];
        if (!ej.is_object()) throw ParseError(where + ": must be an object");
        Edge e;
        e.id = static_cast<int>(idx);
        e.from = detail::string_member(ej, "from", where);
        e.to = detail::string_member(ej, "to", where);
        e.a = detail::number_member(ej, "a", where);
        e.b = detail::number_member(ej, "b", where);
        if (!seen.count(e.from))
            throw ValidationError(where + ": unknown endpoint \"" + e.from + "\"");
        if (!seen.count(e.to))
            throw ValidationError(where + ": unknown endpoint \"" + e.to + "\"");
        if (e.from == e.to)
            throw ValidationError(where + ": self-loop at node \"" + e.from + "\"");
        if (e.b < 0.0) throw ValidationError(where + ": delay slope must be non-negative");
        if (!pairs.insert({e.from, e.to}).second)
            throw ValidationError(where + ": duplicate edge \"" + e.from + "\" -> \"" + e.to
                                  + "\"");
        game.edges.push_back(std::move(e));
    }

    const auto& players = detail::member(doc, "players", "game file");
    if (!players.is_array()) throw ParseError("game file: \"players\" must be an array");
    if (players.empty()) throw ValidationError("at least one player required");
    for (std::size_t idx = 0; idx < players.size(); ++idx) {
        const std::string where = "players[" + std::to_string(idx) + "]";
        const auto& pj = players[idx];
        if (!pj.is_object()) throw ParseError(where + ": must be an object");
        Player p;
        p.id = static_cast<int>(idx);
        p.origin = detail::string_member(pj, "origin", where);
        p.dest = detail::string_member(pj, "dest", where);
        if (!seen.count(p.origin))
            throw ValidationError(where + ": unknown node \"" + p.origin + "\"");
        if (!seen.count(p.dest))
            throw ValidationError(where + ": unknown node \"" + p.dest + "\"");
        if (p.origin == p.dest)
            throw ValidationError(where + ": origin equals destination");
        game.players.push_back(std::move(p));
    }
    return game;
}

// Enumerates, for every player, all simple directed origin->dest paths by
// exhaustive depth-first search. Path lists are sorted lexicographically by
// node sequence and the flat variable numbering follows (player, path) order.
inline StrategyTable enumerate_paths(const Game& game, int max_paths_per_player = 64) {
    std::map<std::string, std::vector<std::pair<std::string, int>>> adjacency;
    for (const Edge& e : game.edges) adjacency[e.from].push_back({e.to, e.id});

    StrategyTable table;
    table.block_start.push_back(0);
    for (const Player& player : game.players) {
        std::vector<Path> paths;
        std::vector<std::string> node_stack{player.origin};
        std::vector<int> edge_stack;
        std::set<std::string> visited{player.origin};

        auto dfs = [&](auto&& self, const std::string& node) -> void {
            if (node == player.dest) {
                if (static_cast<int>(paths.size()) >= max_paths_per_player)
                    throw DomainError("player " + std::to_string(player.id)
                                      + ": path count exceeds limit ("
                                      + std::to_string(max_paths_per_player) + ")");
                paths.push_back({node_stack, edge_stack});
                return;
            }
            auto it = adjacency.find(node);
            if (it == adjacency.end()) return;
            for (const auto& [next, edge_id] : it->second) {
                if (visited.count(next)) continue;
                visited.insert(next);
                node_stack.push_back(next);
                edge_stack.push_back(edge_id);
                self(self, next);
                edge_stack.pop_back();
                node_stack.pop_back();
                visited.erase(next);
            }
        };
        dfs(dfs, player.origin);

        if (paths.empty())
            throw DomainError("player " + std::to_string(player.id) + ": no path exists from "
                              + player.origin + " to " + player.dest);
        std::sort(paths.begin(), paths.end(),
                  [](const Path& x, const Path& y) { return x.node_seq < y.node_seq; });
        table.block_start.push_back(table.block_start.back() + static_cast<int>(paths.size()));
        table.paths_per_player.push_back(std::move(paths));
    }
    return table;
}

}  // namespace congame
