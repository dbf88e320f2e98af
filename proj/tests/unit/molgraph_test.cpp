#include "synkit/molgraph.hpp"
#include "synkit/errors.hpp"
#include "synkit/rng.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

using namespace synkit;

namespace {

std::multiset<std::tuple<int, int, int>> bond_set(const MolecularGraph& g) {
    std::multiset<std::tuple<int, int, int>> s;
    for (const auto& b : g.bonds) {
        auto [lo, hi] = std::minmax(b.i, b.j);
        s.insert({lo, hi, static_cast<int>(b.order)});
    }
    return s;
}

MolecularGraph relabel(const MolecularGraph& g, const std::vector<int>& perm) {
    MolecularGraph out;
    out.atoms.resize(g.atoms.size());
    for (std::size_t v = 0; v < g.atoms.size(); ++v) {
        out.atoms[static_cast<std::size_t>(perm[v])] = g.atoms[v];
    }
    for (const auto& b : g.bonds) {
        out.bonds.push_back({perm[static_cast<std::size_t>(b.i)],
                             perm[static_cast<std::size_t>(b.j)], b.order});
    }
    return out;
}

// Random connected molecule-like graph: a spanning tree plus a few extras.
MolecularGraph random_graph(Rng& rng, int n) {
    const std::vector<std::string> labels = {"C", "N", "O", "S"};
    MolecularGraph g;
    for (int v = 0; v < n; ++v) {
        g.atoms.push_back(labels[static_cast<std::size_t>(rng.next_below(labels.size()))]);
    }
    std::set<std::pair<int, int>> edges;
    for (int v = 1; v < n; ++v) {
        int u = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(v)));
        edges.insert(std::minmax(u, v));
    }
    int extras = static_cast<int>(rng.next_below(3));
    for (int e = 0; e < extras && n > 2; ++e) {
        int u = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
        int v = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
        if (u != v) edges.insert(std::minmax(u, v));
    }
    for (auto [u, v] : edges) {
        auto order = static_cast<BondOrder>(1 + rng.next_below(3));
        g.bonds.push_back({u, v, order});
    }
    return g;
}

}  // namespace

// --- SMILES parsing ----------------------------------------------------------

TEST(SmilesParser, LinearChain) {
    auto g = parse_smiles_subset("CCO");
    EXPECT_EQ(g.atoms, (std::vector<std::string>{"C", "C", "O"}));
    EXPECT_EQ(bond_set(g), (std::multiset<std::tuple<int, int, int>>{{0, 1, 1}, {1, 2, 1}}));
}

TEST(SmilesParser, RingClosureMakesTriangle) {
    auto g = parse_smiles_subset("C1CC1");
    EXPECT_EQ(g.atoms, (std::vector<std::string>{"C", "C", "C"}));
    EXPECT_EQ(bond_set(g),
              (std::multiset<std::tuple<int, int, int>>{{0, 1, 1}, {0, 2, 1}, {1, 2, 1}}));
}

TEST(SmilesParser, BranchWithDoubleBond) {
    auto g = parse_smiles_subset("C(=O)O");
    EXPECT_EQ(g.atoms, (std::vector<std::string>{"C", "O", "O"}));
    EXPECT_EQ(bond_set(g), (std::multiset<std::tuple<int, int, int>>{{0, 1, 2}, {0, 2, 1}}));
}

TEST(SmilesParser, TwoCharacterAtoms) {
    auto g = parse_smiles_subset("ClCBr");
    EXPECT_EQ(g.atoms, (std::vector<std::string>{"Cl", "C", "Br"}));
}

TEST(SmilesParser, BracketAtom) {
    auto g = parse_smiles_subset("C[Se]C");
    EXPECT_EQ(g.atoms, (std::vector<std::string>{"C", "Se", "C"}));
}

TEST(SmilesParser, TripleBond) {
    auto g = parse_smiles_subset("CC#N");
    EXPECT_EQ(bond_set(g), (std::multiset<std::tuple<int, int, int>>{{0, 1, 1}, {1, 2, 3}}));
}

TEST(SmilesParser, ExplicitSingleBond) {
    auto g = parse_smiles_subset("C-C");
    EXPECT_EQ(bond_set(g), (std::multiset<std::tuple<int, int, int>>{{0, 1, 1}}));
}

TEST(SmilesParser, RingBondOrderFromOpening) {
    auto g = parse_smiles_subset("C=1CCC1");  // ring bond carries the double order
    EXPECT_TRUE(bond_set(g).count({0, 3, 2}) == 1);
}

TEST(SmilesParser, ErrorsCarryOffsets) {
    struct Case {
        const char* smiles;
        long offset;
    };
    for (const auto& c : std::initializer_list<Case>{
             {"C(C", 3},     // unmatched '('
             {"CC)", 2},     // unmatched ')'
             {"C1CC", 4},    // unclosed ring digit
             {"CEO", 1},     // unknown atom symbol
             {"cc", 0},      // aromatic
             {"C[NH4]", 4},  // bracket content not supported (digit)
             {"C=", 2},      // dangling bond
             {"C..C", 1},    // unsupported character
         }) {
        try {
            parse_smiles_subset(c.smiles);
            FAIL() << "expected ParseError for " << c.smiles;
        } catch (const ParseError& e) {
            EXPECT_EQ(e.offset(), c.offset) << c.smiles << ": " << e.what();
        }
    }
}

TEST(SmilesParser, ChargeAndStereoRejected) {
    EXPECT_THROW(parse_smiles_subset("C[N+]C"), ParseError);
    EXPECT_THROW(parse_smiles_subset("C[C@H]O"), ParseError);
}

TEST(SmilesParser, GrammarTotality) {
    // Every string from a small generator over the declared grammar parses.
    Rng rng(404);
    for (int trial = 0; trial < 200; ++trial) {
        std::string s = "C";
        int open_parens = 0;
        int len = 1 + static_cast<int>(rng.next_below(8));
        for (int i = 0; i < len; ++i) {
            switch (rng.next_below(5)) {
                case 0: s += "C"; break;
                case 1: s += "N"; break;
                case 2: s += "O"; break;
                case 3:
                    s += (rng.next_below(2) ? "=C" : "#C");
                    break;
                case 4:
                    s += "(C";
                    ++open_parens;
                    break;
            }
            if (open_parens > 0 && rng.next_below(3) == 0) {
                s += ")";
                --open_parens;
            }
        }
        while (open_parens-- > 0) s += ")";
        EXPECT_NO_THROW(parse_smiles_subset(s)) << s;
    }
}

// --- plain-graph fallback ------------------------------------------------------

TEST(PlainGraph, RoundTrip) {
    auto g1 = parse_smiles_subset("CC(=O)O");
    auto g2 = parse_smiles_subset("C1CC1");
    std::ostringstream out;
    write_plain_graphs({g1, g2}, out);
    std::istringstream in(out.str());
    auto back = read_plain_graphs(in, "mem");
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[0].atoms, g1.atoms);
    EXPECT_EQ(bond_set(back[0]), bond_set(g1));
    EXPECT_EQ(bond_set(back[1]), bond_set(g2));
}

TEST(PlainGraph, DisconnectedRejected) {
    std::istringstream in("atom 0 C\natom 1 C\n");
    EXPECT_THROW(read_plain_graphs(in, "mem"), InvariantError);
}

TEST(PlainGraph, NumericOrdersAccepted) {
    std::istringstream in("atom 0 C\natom 1 O\nbond 0 1 2\n");
    auto graphs = read_plain_graphs(in, "mem");
    ASSERT_EQ(graphs.size(), 1u);
    EXPECT_EQ(graphs[0].bonds[0].order, BondOrder::double_bond);
}

TEST(StructuresCsv, ParsesAndRejectsDuplicates) {
    std::istringstream ok("id,smiles\nd1,CCO\nd2,CC\n");
    auto rows = read_structures_csv(ok, "mem");
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].second, "CCO");
    std::istringstream dup("id,smiles\nd1,CCO\nd1,CC\n");
    EXPECT_THROW(read_structures_csv(dup, "mem"), DuplicateKeyError);
}

// --- r-radius subgraph types -----------------------------------------------------

TEST(RRadiusTypes, RadiusZeroIsAtomLabel) {
    auto g = parse_smiles_subset("CCO");
    SubgraphDictionary dict(0);
    auto types = assign_r_radius_types(g, 0, dict);
    EXPECT_EQ(types[0], types[1]);  // both carbons
    EXPECT_NE(types[0], types[2]);  // oxygen differs
    EXPECT_EQ(dict.size(), 2);
}

TEST(RRadiusTypes, SymmetricEthaneSharesType) {
    auto g = parse_smiles_subset("CC");
    SubgraphDictionary dict(1);
    auto types = assign_r_radius_types(g, 1, dict);
    EXPECT_EQ(types[0], types[1]);
    EXPECT_EQ(dict.size(), 1);
}

TEST(RRadiusTypes, FrozenDictionaryMapsUnseenToUnknown) {
    auto g1 = parse_smiles_subset("CC");
    SubgraphDictionary dict(1);
    assign_r_radius_types(g1, 1, dict);
    dict.freeze();
    auto g2 = parse_smiles_subset("CN");
    auto types = assign_r_radius_types(g2, 1, dict);
    EXPECT_EQ(types[0], dict.unknown_id());
    EXPECT_EQ(types[1], dict.unknown_id());
    EXPECT_EQ(dict.size(), 1);  // frozen: no growth
}

TEST(RRadiusTypes, BondOrderSwitchChangesEncoding) {
    auto single = parse_smiles_subset("CC");
    auto dbl = parse_smiles_subset("C=C");
    EXPECT_NE(encode_neighborhood(single, 0, 1, true), encode_neighborhood(dbl, 0, 1, true));
    EXPECT_EQ(encode_neighborhood(single, 0, 1, false), encode_neighborhood(dbl, 0, 1, false));
}

TEST(RRadiusTypes, RelabelingPreservesEncodings) {
    Rng rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 3 + static_cast<int>(rng.next_below(6));
        MolecularGraph g = random_graph(rng, n);
        std::vector<int> perm(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v) perm[static_cast<std::size_t>(v)] = v;
        rng.shuffle(perm);
        MolecularGraph h = relabel(g, perm);
        for (int r = 0; r <= 3; ++r) {
            for (int v = 0; v < n; ++v) {
                EXPECT_EQ(encode_neighborhood(g, v, r),
                          encode_neighborhood(h, perm[static_cast<std::size_t>(v)], r));
            }
        }
    }
}

TEST(RRadiusTypes, RelabelingPreservesTypeMultiset) {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 3 + static_cast<int>(rng.next_below(6));
        MolecularGraph g = random_graph(rng, n);
        std::vector<int> perm(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v) perm[static_cast<std::size_t>(v)] = v;
        rng.shuffle(perm);
        MolecularGraph h = relabel(g, perm);

        SubgraphDictionary dict(2);
        auto tg = assign_r_radius_types(g, 2, dict);
        auto th = assign_r_radius_types(h, 2, dict);
        std::multiset<int> mg(tg.begin(), tg.end());
        std::multiset<int> mh(th.begin(), th.end());
        EXPECT_EQ(mg, mh);
    }
}

namespace {

// Brute-force rooted canonical form of the radius-r ball around `root`:
// minimum over all vertex orderings (root pinned first) of a label+edge
// string. Two vertices share a canonical form iff their induced balls are
// isomorphic as rooted labeled graphs.
std::string brute_canonical_ball(const MolecularGraph& g, int root, int radius) {
    const int n = g.atom_count();
    auto adj = g.adjacency();
    std::vector<int> dist(static_cast<std::size_t>(n), -1);
    std::vector<int> queue = {root};
    dist[static_cast<std::size_t>(root)] = 0;
    for (std::size_t at = 0; at < queue.size(); ++at) {
        int v = queue[at];
        if (dist[static_cast<std::size_t>(v)] == radius) continue;
        for (auto [u, order] : adj[static_cast<std::size_t>(v)]) {
            if (dist[static_cast<std::size_t>(u)] < 0) {
                dist[static_cast<std::size_t>(u)] = dist[static_cast<std::size_t>(v)] + 1;
                queue.push_back(u);
            }
        }
    }
    std::vector<int> ball;
    for (int v = 0; v < n; ++v) {
        if (dist[static_cast<std::size_t>(v)] >= 0) ball.push_back(v);
    }

    std::vector<int> rest;
    for (int v : ball) {
        if (v != root) rest.push_back(v);
    }
    std::sort(rest.begin(), rest.end());

    std::string best;
    do {
        std::vector<int> order = {root};
        order.insert(order.end(), rest.begin(), rest.end());
        std::map<int, int> pos;
        for (std::size_t k = 0; k < order.size(); ++k) pos[order[k]] = static_cast<int>(k);

        std::string enc;
        for (int v : order) enc += g.atoms[static_cast<std::size_t>(v)] + ",";
        std::vector<std::string> edges;
        for (const auto& b : g.bonds) {
            auto it_i = pos.find(b.i);
            auto it_j = pos.find(b.j);
            if (it_i == pos.end() || it_j == pos.end()) continue;
            auto [lo, hi] = std::minmax(it_i->second, it_j->second);
            edges.push_back(std::to_string(lo) + "-" + std::to_string(hi) + ":" +
                            std::to_string(static_cast<int>(b.order)));
        }
        std::sort(edges.begin(), edges.end());
        enc += "|";
        for (const auto& e : edges) enc += e + ";";
        if (best.empty() || enc < best) best = enc;
    } while (std::next_permutation(rest.begin(), rest.end()));
    return best;
}

}  // namespace

TEST(RRadiusTypes, IsomorphicBallsShareEncodings) {
    // Whenever the brute-force oracle says two radius-r balls are isomorphic,
    // the canonical encodings must agree. Graphs stay at <= 8 vertices so the
    // permutation search is exhaustive.
    Rng rng(123);
    int checked = 0;
    auto run_case = [&](const MolecularGraph& g) {
        const int n = g.atom_count();
        for (int r = 1; r <= 2; ++r) {
            for (int u = 0; u < n; ++u) {
                for (int v = u + 1; v < n; ++v) {
                    if (brute_canonical_ball(g, u, r) == brute_canonical_ball(g, v, r)) {
                        EXPECT_EQ(encode_neighborhood(g, u, r), encode_neighborhood(g, v, r));
                        ++checked;
                    }
                }
            }
        }
    };
    for (int trial = 0; trial < 40; ++trial) {
        run_case(random_graph(rng, 3 + static_cast<int>(rng.next_below(6))));
    }
    // Pure-topology graphs (one label, single bonds) make isomorphic balls
    // common, so the property fires often.
    for (int trial = 0; trial < 40; ++trial) {
        int n = 4 + static_cast<int>(rng.next_below(5));
        MolecularGraph g;
        for (int v = 0; v < n; ++v) g.atoms.push_back("C");
        std::set<std::pair<int, int>> edges;
        for (int v = 1; v < n; ++v) {
            int u = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(v)));
            edges.insert(std::minmax(u, v));
        }
        for (int e = 0; e < 2 && n > 2; ++e) {
            int u = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
            int v = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
            if (u != v) edges.insert(std::minmax(u, v));
        }
        for (auto [u, v] : edges) g.bonds.push_back({u, v, BondOrder::single});
        run_case(g);
    }
    EXPECT_GT(checked, 50);  // the property must actually fire
}

TEST(RRadiusTypes, MonotoneRefinement) {
    // Vertices separated at radius r stay separated at radius r+1.
    Rng rng(55);
    for (int trial = 0; trial < 30; ++trial) {
        int n = 4 + static_cast<int>(rng.next_below(5));
        MolecularGraph g = random_graph(rng, n);
        for (int r = 0; r < 3; ++r) {
            for (int u = 0; u < n; ++u) {
                for (int v = u + 1; v < n; ++v) {
                    if (encode_neighborhood(g, u, r) != encode_neighborhood(g, v, r)) {
                        EXPECT_NE(encode_neighborhood(g, u, r + 1),
                                  encode_neighborhood(g, v, r + 1));
                    }
                }
            }
        }
    }
}
