#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace trapeze {

/// A security class. Only meaningful relative to the Lattice that issued it.
struct Label {
  std::uint16_t id = 0;

  friend auto operator<=>(const Label&, const Label&) = default;
};

/// A finite, explicitly enumerated security lattice.
///
/// The order is given by Hasse-style edges (lower, higher); the
/// reflexive-transitive closure and the join table are computed once at
/// construction, which also validates the lattice laws. Instances are
/// immutable afterwards.
class Lattice {
 public:
  using Edge = std::pair<std::string, std::string>;

  /// Throws LatticeError on a cycle, a missing bottom/top, a pair without a
  /// least upper bound, or an edge naming an unknown label.
  Lattice(std::vector<std::string> labels, const std::vector<Edge>& edges);

  /// The four-point lattice bot < {b, e} < top with b and e incomparable.
  static Lattice diamond();
  /// bot < top.
  static Lattice two_point();

  std::size_t size() const noexcept { return names_.size(); }
  Label bottom() const noexcept { return bottom_; }
  Label top() const noexcept { return top_; }

  bool leq(Label a, Label b) const { return leq_[index(a, b)]; }
  bool lt(Label a, Label b) const { return a != b && leq(a, b); }
  bool comparable(Label a, Label b) const { return leq(a, b) || leq(b, a); }
  Label join(Label a, Label b) const { return Label{join_[index(a, b)]}; }

  const std::string& name(Label l) const { return names_.at(l.id); }
  std::optional<Label> find(std::string_view name) const;
  /// Like find, but throws ConfigError naming the unknown label.
  Label at(std::string_view name) const;

  std::vector<Label> labels() const;
  const std::vector<Edge>& edges() const noexcept { return edges_; }

 private:
  std::size_t index(Label a, Label b) const { return std::size_t{a.id} * names_.size() + b.id; }

  std::vector<std::string> names_;
  std::vector<Edge> edges_;
  std::vector<bool> leq_;
  std::vector<std::uint16_t> join_;
  Label bottom_{};
  Label top_{};
};

/// Re-run the lattice checks. Construction already validates, so this only
/// exists for callers holding raw label/edge lists.
void validate_lattice(const std::vector<std::string>& labels, const std::vector<Lattice::Edge>& edges);

}  // namespace trapeze
