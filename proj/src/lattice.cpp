#include "trapeze/lattice.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <unordered_map>

#include "trapeze/errors.hpp"

namespace trapeze {

namespace {

void check_label_name(const std::string& name) {
  if (name.empty()) {
    throw LatticeError("label names must be non-empty");
  }
  for (unsigned char c : name) {
    if (std::isspace(c) || std::iscntrl(c)) {
      throw LatticeError("label name '" + name + "' contains whitespace or control characters");
    }
  }
}

}  // namespace

Lattice::Lattice(std::vector<std::string> labels, const std::vector<Edge>& edges)
    : names_(std::move(labels)), edges_(edges) {
  const std::size_t n = names_.size();
  if (n == 0) {
    throw LatticeError("lattice has no labels");
  }
  if (n > std::numeric_limits<std::uint16_t>::max()) {
    throw LatticeError("too many labels");
  }

  std::unordered_map<std::string, std::uint16_t> ids;
  for (std::size_t i = 0; i < n; ++i) {
    check_label_name(names_[i]);
    if (!ids.emplace(names_[i], static_cast<std::uint16_t>(i)).second) {
      throw LatticeError("duplicate label '" + names_[i] + "'");
    }
  }

  leq_.assign(n * n, false);
  for (std::size_t i = 0; i < n; ++i) {
    leq_[i * n + i] = true;
  }
  for (const auto& [lower, higher] : edges_) {
    auto lo = ids.find(lower);
    auto hi = ids.find(higher);
    if (lo == ids.end()) throw LatticeError("edge references unknown label '" + lower + "'");
    if (hi == ids.end()) throw LatticeError("edge references unknown label '" + higher + "'");
    leq_[std::size_t{lo->second} * n + hi->second] = true;
  }

  // Warshall closure.
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!leq_[i * n + k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (leq_[k * n + j]) leq_[i * n + j] = true;
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (leq_[i * n + j] && leq_[j * n + i]) {
        throw LatticeError("cycle detected between '" + names_[i] + "' and '" + names_[j] + "'");
      }
    }
  }

  join_.assign(n * n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      std::optional<std::size_t> least;
      for (std::size_t u = 0; u < n; ++u) {
        if (!leq_[a * n + u] || !leq_[b * n + u]) continue;
        bool below_all = true;
        for (std::size_t w = 0; w < n && below_all; ++w) {
          if (leq_[a * n + w] && leq_[b * n + w] && !leq_[u * n + w]) below_all = false;
        }
        if (below_all) {
          least = u;
          break;
        }
      }
      if (!least) {
        throw LatticeError("missing join for {'" + names_[a] + "', '" + names_[b] + "'}");
      }
      join_[a * n + b] = join_[b * n + a] = static_cast<std::uint16_t>(*least);
    }
  }

  std::optional<std::size_t> bottom;
  std::optional<std::size_t> top;
  for (std::size_t i = 0; i < n; ++i) {
    bool is_bottom = true;
    bool is_top = true;
    for (std::size_t j = 0; j < n; ++j) {
      is_bottom = is_bottom && leq_[i * n + j];
      is_top = is_top && leq_[j * n + i];
    }
    if (is_bottom) bottom = i;
    if (is_top) top = i;
  }
  if (!bottom) throw LatticeError("missing bottom element");
  if (!top) throw LatticeError("missing top element");
  bottom_ = Label{static_cast<std::uint16_t>(*bottom)};
  top_ = Label{static_cast<std::uint16_t>(*top)};
}

Lattice Lattice::diamond() {
  return Lattice({"bot", "b", "e", "top"}, {{"bot", "b"}, {"bot", "e"}, {"b", "top"}, {"e", "top"}});
}

Lattice Lattice::two_point() { return Lattice({"bot", "top"}, {{"bot", "top"}}); }

std::optional<Label> Lattice::find(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return Label{static_cast<std::uint16_t>(it - names_.begin())};
}

Label Lattice::at(std::string_view name) const {
  if (auto l = find(name)) return *l;
  throw ConfigError("unknown label '" + std::string(name) + "'");
}

std::vector<Label> Lattice::labels() const {
  std::vector<Label> out;
  out.reserve(names_.size());
  for (std::size_t i = 0; i < names_.size(); ++i) out.push_back(Label{static_cast<std::uint16_t>(i)});
  return out;
}

void validate_lattice(const std::vector<std::string>& labels, const std::vector<Lattice::Edge>& edges) {
  Lattice checked(labels, edges);
  (void)checked;
}

}  // namespace trapeze
