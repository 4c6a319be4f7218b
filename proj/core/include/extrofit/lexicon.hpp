#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "extrofit/embedding_io.hpp"

namespace extrofit {

// Undirected synonym relation over tokens. No self-loops; each unordered pair
// is stored once, adjacency is symmetric.
class SynonymGraph {
 public:
  using NodeId = std::uint32_t;

  // Returns true if the edge is new. Self-loops are ignored.
  bool add_edge(std::string_view a, std::string_view b);

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return edges_.empty(); }

  const Vocabulary& nodes() const noexcept { return nodes_; }
  // Pairs (a, b) with a < b, ordered by node id.
  const std::set<std::pair<NodeId, NodeId>>& edges() const noexcept { return edges_; }
  const std::vector<NodeId>& adjacency(NodeId node) const { return adjacency_[node]; }

  bool has_edge(std::string_view a, std::string_view b) const;
  // Neighbor tokens in insertion order; empty for unknown tokens.
  std::vector<std::string> neighbors(std::string_view token) const;

 private:
  NodeId intern(std::string_view token);

  Vocabulary nodes_;
  std::set<std::pair<NodeId, NodeId>> edges_;
  std::vector<std::vector<NodeId>> adjacency_;
};

struct LexiconOptions {
  bool lowercase = false;
};

struct LexiconLoad {
  SynonymGraph graph;
  std::size_t lines = 0;
  std::size_t edges_dropped_oov = 0;
};

// Reads `headword syn_1 syn_2 ...` lines. Each (headword, syn) pair becomes an
// edge when both tokens are in `vocab`; otherwise it is counted as dropped.
LexiconLoad load_lexicon(std::istream& in, const Vocabulary& vocab,
                         const LexiconOptions& options = {});
LexiconLoad load_lexicon(const std::filesystem::path& path, const Vocabulary& vocab,
                         const LexiconOptions& options = {});

// Partition of a vocabulary into synonym classes: connected components of a
// SynonymGraph plus one singleton class per uncovered word.
class SynonymClasses {
 public:
  using ClassId = std::uint32_t;

  SynonymClasses(VocabularyPtr vocab, std::vector<ClassId> class_of);

  const Vocabulary& vocab() const noexcept { return *vocab_; }
  const VocabularyPtr& vocab_ptr() const noexcept { return vocab_; }

  std::size_t n_classes() const noexcept { return members_.size(); }
  std::size_t n_nonsingleton_classes() const noexcept { return n_nonsingleton_; }
  // Words that share a class with at least one other word.
  std::size_t n_covered_words() const noexcept { return n_covered_; }

  // Label of each vocabulary row, dense ids 0..n_classes-1.
  std::span<const ClassId> labels() const noexcept { return class_of_; }
  ClassId class_of(std::size_t row) const { return class_of_[row]; }
  std::optional<ClassId> class_of(std::string_view token) const;
  // Member rows in vocabulary order.
  const std::vector<std::size_t>& members(ClassId id) const { return members_[id]; }

 private:
  VocabularyPtr vocab_;
  std::vector<ClassId> class_of_;
  std::vector<std::vector<std::size_t>> members_;
  std::size_t n_nonsingleton_ = 0;
  std::size_t n_covered_ = 0;
};

// Class ids follow first appearance in vocabulary order. Throws UnknownToken
// if the graph mentions a token outside `vocab`.
SynonymClasses build_classes(const SynonymGraph& graph, VocabularyPtr vocab);

// Tokens sharing `token`'s class, `token` included, in vocabulary order.
std::vector<std::string> class_members(const SynonymClasses& classes, std::string_view token);

}  // namespace extrofit
