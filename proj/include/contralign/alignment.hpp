#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace contralign {

/// One correspondence between source position `src` and target position
/// `tgt`, both 0-based.
struct Link {
  int src = 0;
  int tgt = 0;

  friend auto operator<=>(const Link&, const Link&) = default;
};

/// A set of links kept as a sorted vector. The sorted vector is also the
/// canonical form used for tie-breaking: alignments compare
/// lexicographically by their link lists.
class Alignment {
 public:
  Alignment() = default;
  Alignment(std::initializer_list<Link> links);
  explicit Alignment(std::vector<Link> links);

  /// Returns false if the link was already present.
  bool insert(Link link);
  bool erase(Link link);
  bool contains(Link link) const;

  std::size_t size() const { return links_.size(); }
  bool empty() const { return links_.empty(); }
  std::span<const Link> links() const { return links_; }
  auto begin() const { return links_.begin(); }
  auto end() const { return links_.end(); }

  /// Copy with one extra link.
  Alignment with(Link link) const;

  friend auto operator<=>(const Alignment&, const Alignment&) = default;
  friend bool operator==(const Alignment&, const Alignment&) = default;

 private:
  std::vector<Link> links_;
};

/// "s-t" items, 1-based, space separated, in canonical order.
std::string to_string(const Alignment& alignment);

struct AlignmentHash {
  std::size_t operator()(const Alignment& alignment) const noexcept;
};

}  // namespace contralign
