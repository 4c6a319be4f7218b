#include "extrofit/lexicon.hpp"

#include <istream>
#include <string>

#include "extrofit/error.hpp"
#include "extrofit/gz_stream.hpp"
#include "text.hpp"
#include "union_find.hpp"

namespace extrofit {

SynonymGraph::NodeId SynonymGraph::intern(std::string_view token) {
  if (const auto id = nodes_.find(token)) return static_cast<NodeId>(*id);
  nodes_.try_add(std::string(token));
  adjacency_.emplace_back();
  return static_cast<NodeId>(nodes_.size() - 1);
}

bool SynonymGraph::add_edge(std::string_view a, std::string_view b) {
  if (a == b) return false;
  NodeId ia = intern(a);
  NodeId ib = intern(b);
  const auto key = ia < ib ? std::pair{ia, ib} : std::pair{ib, ia};
  if (!edges_.insert(key).second) return false;
  adjacency_[ia].push_back(ib);
  adjacency_[ib].push_back(ia);
  return true;
}

bool SynonymGraph::has_edge(std::string_view a, std::string_view b) const {
  const auto ia = nodes_.find(a);
  const auto ib = nodes_.find(b);
  if (!ia || !ib) return false;
  const auto x = static_cast<NodeId>(*ia);
  const auto y = static_cast<NodeId>(*ib);
  return edges_.contains(x < y ? std::pair{x, y} : std::pair{y, x});
}

std::vector<std::string> SynonymGraph::neighbors(std::string_view token) const {
  std::vector<std::string> out;
  const auto id = nodes_.find(token);
  if (!id) return out;
  for (NodeId n : adjacency_[*id]) out.push_back(nodes_[n]);
  return out;
}

LexiconLoad load_lexicon(std::istream& in, const Vocabulary& vocab, const LexiconOptions& options) {
  LexiconLoad result;
  std::string line;
  std::vector<std::string_view> fields;
  bool any_content = false;
  while (std::getline(in, line)) {
    ++result.lines;
    detail::split_ws(line, fields);
    if (fields.empty()) continue;
    any_content = true;

    std::string head = options.lowercase ? detail::lowercase(fields[0]) : std::string(fields[0]);
    const bool head_known = vocab.contains(head);
    for (std::size_t k = 1; k < fields.size(); ++k) {
      std::string syn =
          options.lowercase ? detail::lowercase(fields[k]) : std::string(fields[k]);
      if (syn == head) continue;
      if (!head_known || !vocab.contains(syn)) {
        ++result.edges_dropped_oov;
        continue;
      }
      result.graph.add_edge(head, syn);
    }
  }
  if (in.bad()) throw Error(ErrorCode::Io, "read failure");
  if (!any_content) throw Error(ErrorCode::EmptyInput, "lexicon has no entries");
  return result;
}

LexiconLoad load_lexicon(const std::filesystem::path& path, const Vocabulary& vocab,
                         const LexiconOptions& options) {
  InputFile file(path);
  return load_lexicon(file.stream(), vocab, options);
}

SynonymClasses::SynonymClasses(VocabularyPtr vocab, std::vector<ClassId> class_of)
    : vocab_(std::move(vocab)), class_of_(std::move(class_of)) {
  if (!vocab_ || class_of_.size() != vocab_->size())
    throw Error(ErrorCode::PartitionMismatch, "one class label per vocabulary word required");
  for (std::size_t row = 0; row < class_of_.size(); ++row) {
    const ClassId id = class_of_[row];
    if (id > members_.size())
      throw Error(ErrorCode::LabelOutOfRange, "class ids must be dense in first-seen order");
    if (id == members_.size()) members_.emplace_back();
    members_[id].push_back(row);
  }
  for (const auto& m : members_) {
    if (m.size() > 1) {
      ++n_nonsingleton_;
      n_covered_ += m.size();
    }
  }
}

std::optional<SynonymClasses::ClassId> SynonymClasses::class_of(std::string_view token) const {
  const auto row = vocab_->find(token);
  if (!row) return std::nullopt;
  return class_of_[*row];
}

SynonymClasses build_classes(const SynonymGraph& graph, VocabularyPtr vocab) {
  if (!vocab) throw Error(ErrorCode::PartitionMismatch, "null vocabulary");
  std::vector<std::size_t> row_of_node(graph.node_count());
  for (std::size_t n = 0; n < graph.node_count(); ++n) {
    const auto row = vocab->find(graph.nodes()[n]);
    if (!row) throw Error(ErrorCode::UnknownToken, graph.nodes()[n]);
    row_of_node[n] = *row;
  }

  detail::UnionFind sets(vocab->size());
  for (const auto& [a, b] : graph.edges()) sets.unite(row_of_node[a], row_of_node[b]);

  constexpr auto kUnassigned = static_cast<SynonymClasses::ClassId>(-1);
  std::vector<SynonymClasses::ClassId> id_of_root(vocab->size(), kUnassigned);
  std::vector<SynonymClasses::ClassId> class_of(vocab->size());
  SynonymClasses::ClassId next = 0;
  for (std::size_t row = 0; row < vocab->size(); ++row) {
    const std::size_t root = sets.find(row);
    if (id_of_root[root] == kUnassigned) id_of_root[root] = next++;
    class_of[row] = id_of_root[root];
  }
  return SynonymClasses(std::move(vocab), std::move(class_of));
}

std::vector<std::string> class_members(const SynonymClasses& classes, std::string_view token) {
  const auto id = classes.class_of(token);
  if (!id) throw Error(ErrorCode::UnknownToken, std::string(token));
  std::vector<std::string> out;
  for (std::size_t row : classes.members(*id)) out.push_back(classes.vocab()[row]);
  return out;
}

}  // namespace extrofit
