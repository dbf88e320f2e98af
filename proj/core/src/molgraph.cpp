#include "synkit/molgraph.hpp"

#include "synkit/errors.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

namespace synkit {

std::vector<std::vector<std::pair<int, BondOrder>>> MolecularGraph::adjacency() const {
    std::vector<std::vector<std::pair<int, BondOrder>>> adj(atoms.size());
    for (const auto& b : bonds) {
        adj[static_cast<std::size_t>(b.i)].emplace_back(b.j, b.order);
        adj[static_cast<std::size_t>(b.j)].emplace_back(b.i, b.order);
    }
    return adj;
}

void validate_graph(const MolecularGraph& graph) {
    const int n = graph.atom_count();
    if (n == 0) throw InvariantError("molecular graph has no atoms");
    std::set<std::pair<int, int>> seen;
    for (const auto& b : graph.bonds) {
        if (b.i < 0 || b.i >= n || b.j < 0 || b.j >= n) {
            throw InvariantError("bond endpoint out of range");
        }
        if (b.i == b.j) throw InvariantError("self-bond on atom " + std::to_string(b.i));
        auto key = std::minmax(b.i, b.j);
        if (!seen.insert(key).second) {
            throw InvariantError("duplicate bond between atoms " + std::to_string(key.first) +
                                 " and " + std::to_string(key.second));
        }
    }
    // Connectivity by flood fill.
    std::vector<bool> visited(static_cast<std::size_t>(n), false);
    std::vector<int> stack = {0};
    visited[0] = true;
    auto adj = graph.adjacency();
    int reached = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (auto [u, order] : adj[static_cast<std::size_t>(v)]) {
            if (!visited[static_cast<std::size_t>(u)]) {
                visited[static_cast<std::size_t>(u)] = true;
                ++reached;
                stack.push_back(u);
            }
        }
    }
    if (reached != n) throw InvariantError("molecular graph is not connected");
}

// --- SMILES subset parser -------------------------------------------------

namespace {

constexpr std::array<const char*, 10> kOrganicAtoms = {"B", "C",  "N",  "O", "P",
                                                       "S", "F", "Cl", "Br", "I"};

bool is_organic_atom(const std::string& sym) {
    return std::find_if(kOrganicAtoms.begin(), kOrganicAtoms.end(),
                        [&](const char* a) { return sym == a; }) != kOrganicAtoms.end();
}

struct RingOpening {
    int atom;
    std::optional<BondOrder> order;
};

}  // namespace

MolecularGraph parse_smiles_subset(const std::string& smiles) {
    MolecularGraph graph;
    std::vector<int> branch_stack;
    std::array<std::optional<RingOpening>, 10> rings;

    int prev = -1;                          // atom awaiting the next connection
    std::optional<BondOrder> pending;       // explicit bond symbol seen

    auto add_atom = [&](const std::string& symbol, std::size_t offset) {
        int idx = graph.atom_count();
        graph.atoms.push_back(symbol);
        if (prev >= 0) {
            graph.bonds.push_back({prev, idx, pending.value_or(BondOrder::single)});
        } else if (pending) {
            throw ParseError("bond symbol before first atom", static_cast<long>(offset));
        }
        pending.reset();
        prev = idx;
    };

    std::size_t i = 0;
    const std::size_t n = smiles.size();
    while (i < n) {
        char c = smiles[i];
        if (c == '-') {
            pending = BondOrder::single;
            ++i;
        } else if (c == '=') {
            pending = BondOrder::double_bond;
            ++i;
        } else if (c == '#') {
            pending = BondOrder::triple;
            ++i;
        } else if (c == '(') {
            if (prev < 0) throw ParseError("branch before first atom", static_cast<long>(i));
            if (pending) throw ParseError("bond symbol before '('", static_cast<long>(i));
            branch_stack.push_back(prev);
            ++i;
        } else if (c == ')') {
            if (branch_stack.empty()) {
                throw ParseError("unmatched ')'", static_cast<long>(i));
            }
            if (pending) throw ParseError("dangling bond symbol before ')'", static_cast<long>(i));
            prev = branch_stack.back();
            branch_stack.pop_back();
            ++i;
        } else if (c >= '1' && c <= '9') {
            if (prev < 0) throw ParseError("ring closure before first atom", static_cast<long>(i));
            auto& slot = rings[static_cast<std::size_t>(c - '0')];
            if (!slot) {
                slot = RingOpening{prev, pending};
            } else {
                if (slot->atom == prev) {
                    throw ParseError("ring closure bonds atom to itself", static_cast<long>(i));
                }
                BondOrder order = BondOrder::single;
                if (slot->order && pending && *slot->order != *pending) {
                    throw ParseError("conflicting ring bond orders", static_cast<long>(i));
                }
                if (slot->order) order = *slot->order;
                if (pending) order = *pending;
                for (const auto& b : graph.bonds) {
                    auto key = std::minmax(b.i, b.j);
                    if (key == std::minmax(slot->atom, prev)) {
                        throw ParseError("ring closure duplicates an existing bond",
                                         static_cast<long>(i));
                    }
                }
                graph.bonds.push_back({slot->atom, prev, order});
                slot.reset();
            }
            pending.reset();
            ++i;
        } else if (c == '[') {
            std::size_t close = smiles.find(']', i);
            if (close == std::string::npos) {
                throw ParseError("unterminated bracket atom", static_cast<long>(i));
            }
            std::string body = smiles.substr(i + 1, close - i - 1);
            if (body.empty()) throw ParseError("empty bracket atom", static_cast<long>(i));
            for (std::size_t k = 0; k < body.size(); ++k) {
                char bc = body[k];
                if (bc == '+' || bc == '-') {
                    throw ParseError("charges are not supported", static_cast<long>(i + 1 + k));
                }
                if (bc == '@') {
                    throw ParseError("stereo markers are not supported",
                                     static_cast<long>(i + 1 + k));
                }
                if (std::isdigit(static_cast<unsigned char>(bc))) {
                    throw ParseError("isotopes / H counts are not supported",
                                     static_cast<long>(i + 1 + k));
                }
            }
            if (!std::isupper(static_cast<unsigned char>(body[0]))) {
                throw ParseError("aromatic atoms are not supported", static_cast<long>(i + 1));
            }
            for (std::size_t k = 1; k < body.size(); ++k) {
                if (!std::islower(static_cast<unsigned char>(body[k]))) {
                    throw ParseError("unknown atom symbol '" + body + "'",
                                     static_cast<long>(i + 1));
                }
            }
            add_atom(body, i);
            i = close + 1;
        } else if (std::isupper(static_cast<unsigned char>(c))) {
            // Two-character organic symbols first (Cl, Br).
            std::string sym(1, c);
            if (i + 1 < n && std::islower(static_cast<unsigned char>(smiles[i + 1]))) {
                std::string two = sym + smiles[i + 1];
                if (is_organic_atom(two)) {
                    add_atom(two, i);
                    i += 2;
                    continue;
                }
            }
            if (!is_organic_atom(sym)) {
                throw ParseError("unknown atom symbol '" + sym + "'", static_cast<long>(i));
            }
            add_atom(sym, i);
            ++i;
        } else if (std::islower(static_cast<unsigned char>(c))) {
            throw ParseError("aromatic atoms are not supported", static_cast<long>(i));
        } else {
            throw ParseError(std::string("unsupported character '") + c + "'",
                             static_cast<long>(i));
        }
    }

    if (pending) throw ParseError("dangling bond symbol at end of input", static_cast<long>(n));
    if (!branch_stack.empty()) {
        throw ParseError("unmatched '('", static_cast<long>(n));
    }
    for (std::size_t d = 1; d < rings.size(); ++d) {
        if (rings[d]) {
            throw ParseError("unclosed ring digit " + std::to_string(d), static_cast<long>(n));
        }
    }
    if (graph.atoms.empty()) throw ParseError("no atoms in input", 0);
    validate_graph(graph);
    return graph;
}

// --- Plain-graph fallback format -------------------------------------------

namespace {

BondOrder parse_order_token(const std::string& tok, const std::string& origin,
                            std::size_t line_no) {
    if (tok == "single" || tok == "1") return BondOrder::single;
    if (tok == "double" || tok == "2") return BondOrder::double_bond;
    if (tok == "triple" || tok == "3") return BondOrder::triple;
    throw ParseError(origin + ":" + std::to_string(line_no) + ": bad bond order '" + tok + "'");
}

const char* order_word(BondOrder order) {
    switch (order) {
        case BondOrder::single: return "single";
        case BondOrder::double_bond: return "double";
        case BondOrder::triple: return "triple";
    }
    return "single";
}

}  // namespace

std::vector<MolecularGraph> read_plain_graphs(std::istream& in, const std::string& origin) {
    std::vector<MolecularGraph> graphs;
    MolecularGraph cur;
    std::vector<std::pair<int, std::string>> atoms;
    bool any_line = false;

    auto flush = [&](std::size_t line_no) {
        if (atoms.empty() && cur.bonds.empty()) return;
        std::sort(atoms.begin(), atoms.end());
        for (std::size_t k = 0; k < atoms.size(); ++k) {
            if (atoms[k].first != static_cast<int>(k)) {
                throw FormatError(origin + ":" + std::to_string(line_no) +
                                  ": atom indices must be dense from 0");
            }
            cur.atoms.push_back(atoms[k].second);
        }
        validate_graph(cur);
        graphs.push_back(std::move(cur));
        cur = MolecularGraph{};
        atoms.clear();
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            flush(line_no);
            continue;
        }
        any_line = true;
        std::istringstream ls(line);
        std::string kind;
        ls >> kind;
        if (kind == "atom") {
            int idx;
            std::string element;
            if (!(ls >> idx >> element)) {
                throw FormatError(origin + ":" + std::to_string(line_no) +
                                  ": expected `atom <index> <element>`");
            }
            atoms.emplace_back(idx, element);
        } else if (kind == "bond") {
            int i, j;
            std::string order;
            if (!(ls >> i >> j >> order)) {
                throw FormatError(origin + ":" + std::to_string(line_no) +
                                  ": expected `bond <i> <j> <order>`");
            }
            cur.bonds.push_back({i, j, parse_order_token(order, origin, line_no)});
        } else {
            throw FormatError(origin + ":" + std::to_string(line_no) + ": unknown record '" +
                              kind + "'");
        }
    }
    flush(line_no + 1);
    if (!any_line && graphs.empty()) {
        throw FormatError(origin + ": empty plain-graph file");
    }
    return graphs;
}

void write_plain_graphs(const std::vector<MolecularGraph>& graphs, std::ostream& out) {
    for (std::size_t g = 0; g < graphs.size(); ++g) {
        if (g > 0) out << "\n";
        const auto& graph = graphs[g];
        for (int v = 0; v < graph.atom_count(); ++v) {
            out << "atom " << v << ' ' << graph.atoms[static_cast<std::size_t>(v)] << "\n";
        }
        for (const auto& b : graph.bonds) {
            out << "bond " << b.i << ' ' << b.j << ' ' << order_word(b.order) << "\n";
        }
    }
}

std::vector<std::pair<std::string, std::string>> read_structures_csv(std::istream& in,
                                                                     const std::string& origin) {
    std::string line;
    if (!std::getline(in, line)) {
        throw FormatError(origin + ": empty file, expected header `id,smiles`");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "id,smiles") {
        throw FormatError(origin + ": bad header, expected `id,smiles`");
    }
    std::vector<std::pair<std::string, std::string>> out;
    std::set<std::string> ids_seen;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw FormatError(origin + ":" + std::to_string(line_no) + ": expected 2 fields");
        }
        std::string id = line.substr(0, comma);
        std::string smiles = line.substr(comma + 1);
        if (id.empty() || smiles.empty()) {
            throw FormatError(origin + ":" + std::to_string(line_no) + ": empty id or smiles");
        }
        if (!ids_seen.insert(id).second) {
            throw DuplicateKeyError(origin + ":" + std::to_string(line_no) + ": duplicate id '" +
                                    id + "'");
        }
        out.emplace_back(std::move(id), std::move(smiles));
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> load_structures_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open file: " + path);
    return read_structures_csv(in, path);
}

// --- r-radius subgraph types ------------------------------------------------

namespace {

// Depth-k unfolding rooted at v. Children are the full neighbor set (the
// walk may step back through the parent), sorted by (bond order, child
// encoding) so the result depends only on structure and labels.
std::string encode_recursive(const MolecularGraph& graph,
                             const std::vector<std::vector<std::pair<int, BondOrder>>>& adj,
                             int v, int depth, bool use_bond_orders) {
    const std::string& label = graph.atoms[static_cast<std::size_t>(v)];
    if (depth == 0) return label;

    std::vector<std::string> children;
    children.reserve(adj[static_cast<std::size_t>(v)].size());
    for (auto [u, order] : adj[static_cast<std::size_t>(v)]) {
        std::string prefix = use_bond_orders ? std::to_string(static_cast<int>(order)) + "~" : "";
        children.push_back(prefix +
                           encode_recursive(graph, adj, u, depth - 1, use_bond_orders));
    }
    std::sort(children.begin(), children.end());

    std::string out = label;
    out += '(';
    for (std::size_t k = 0; k < children.size(); ++k) {
        if (k > 0) out += ',';
        out += children[k];
    }
    out += ')';
    return out;
}

}  // namespace

std::string encode_neighborhood(const MolecularGraph& graph, int vertex, int radius,
                                bool use_bond_orders) {
    if (vertex < 0 || vertex >= graph.atom_count()) {
        throw ArgumentError("encode_neighborhood: vertex out of range");
    }
    if (radius < 0) throw ArgumentError("encode_neighborhood: negative radius");
    auto adj = graph.adjacency();
    return encode_recursive(graph, adj, vertex, radius, use_bond_orders);
}

int SubgraphDictionary::id_of(const std::string& encoding) {
    auto it = entries_.find(encoding);
    if (it != entries_.end()) return it->second;
    if (frozen_) return unknown_id();
    int id = size();
    entries_.emplace(encoding, id);
    return id;
}

int SubgraphDictionary::lookup(const std::string& encoding) const {
    auto it = entries_.find(encoding);
    return it != entries_.end() ? it->second : unknown_id();
}

void SubgraphDictionary::insert_entry(const std::string& encoding, int id) {
    if (id != size()) {
        throw InvariantError("dictionary entries must be inserted with dense ids");
    }
    if (!entries_.emplace(encoding, id).second) {
        throw DuplicateKeyError("dictionary already contains encoding");
    }
}

std::vector<int> assign_r_radius_types(const MolecularGraph& graph, int radius,
                                       SubgraphDictionary& dict) {
    if (dict.radius() != radius) {
        throw ArgumentError("dictionary radius " + std::to_string(dict.radius()) +
                            " does not match requested radius " + std::to_string(radius));
    }
    auto adj = graph.adjacency();
    std::vector<int> types;
    types.reserve(graph.atoms.size());
    for (int v = 0; v < graph.atom_count(); ++v) {
        types.push_back(
            dict.id_of(encode_recursive(graph, adj, v, radius, dict.use_bond_orders())));
    }
    return types;
}

}  // namespace synkit
