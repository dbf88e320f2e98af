#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace synkit {

enum class BondOrder : int { single = 1, double_bond = 2, triple = 3 };

// Labeled undirected molecular graph. Always connected; bonds are stored
// once per undirected edge.
struct MolecularGraph {
    struct Bond {
        int i = 0;
        int j = 0;
        BondOrder order = BondOrder::single;
    };

    std::vector<std::string> atoms;
    std::vector<Bond> bonds;

    int atom_count() const { return static_cast<int>(atoms.size()); }

    // Adjacency as (neighbor, order) lists, built on demand.
    std::vector<std::vector<std::pair<int, BondOrder>>> adjacency() const;
};

// Validates index ranges, duplicate edges and connectivity; throws on violation.
void validate_graph(const MolecularGraph& graph);

// Parses the supported SMILES subset: organic-subset atoms (B,C,N,O,P,S,F,
// Cl,Br,I), bracket atoms [X], bond symbols - = #, branches (...), ring
// closure digits 1-9. Hydrogens are implicit and never materialized.
// Aromatic, stereo, charge and isotope tokens are rejected with the byte
// offset of the offending character.
MolecularGraph parse_smiles_subset(const std::string& smiles);

// Plain-graph fallback format: `atom <index> <element>` and
// `bond <i> <j> <order>` lines; a blank line separates molecules. Order is
// written as single/double/triple (1/2/3 accepted on input).
std::vector<MolecularGraph> read_plain_graphs(std::istream& in, const std::string& origin);
void write_plain_graphs(const std::vector<MolecularGraph>& graphs, std::ostream& out);

// Drug-structure CSV, header `id,smiles`.
std::vector<std::pair<std::string, std::string>> load_structures_csv(const std::string& path);
std::vector<std::pair<std::string, std::string>> read_structures_csv(std::istream& in,
                                                                     const std::string& origin);

// Vocabulary of canonical r-radius neighborhood encodings. Ids are dense
// 0..size()-1; when frozen, encodings not in the dictionary map to the
// reserved unknown id (== size()).
class SubgraphDictionary {
public:
    explicit SubgraphDictionary(int radius, bool use_bond_orders = true)
        : radius_(radius), use_bond_orders_(use_bond_orders) {}

    int radius() const { return radius_; }
    bool use_bond_orders() const { return use_bond_orders_; }
    bool frozen() const { return frozen_; }
    void freeze() { frozen_ = true; }

    int size() const { return static_cast<int>(entries_.size()); }
    int unknown_id() const { return size(); }
    // Embedding tables sized with this count accept every id the dictionary
    // can produce, known and unknown alike.
    int vocabulary_size() const { return size() + 1; }

    // Id for an encoding: existing id, a fresh one (unfrozen), or the
    // reserved unknown id (frozen).
    int id_of(const std::string& encoding);

    // Non-growing lookup: existing id or the reserved unknown id.
    int lookup(const std::string& encoding) const;

    const std::map<std::string, int>& entries() const { return entries_; }
    void insert_entry(const std::string& encoding, int id);

private:
    int radius_ = 0;
    bool use_bond_orders_ = true;
    bool frozen_ = false;
    std::map<std::string, int> entries_;
};

// Canonical encoding of a vertex's radius-r neighborhood: breadth-first
// unfolding to depth r with children sorted by (bond order, recursive
// encoding). Invariant under vertex relabeling.
std::string encode_neighborhood(const MolecularGraph& graph, int vertex, int radius,
                                bool use_bond_orders = true);

// One type id per vertex, resolved through (and possibly growing) the
// dictionary.
std::vector<int> assign_r_radius_types(const MolecularGraph& graph, int radius,
                                       SubgraphDictionary& dict);

}  // namespace synkit
