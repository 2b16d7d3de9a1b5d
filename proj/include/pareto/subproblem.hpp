#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace pareto {

/// Nonempty sorted subset I of the objective indices, identifying MOP^I.
/// Stored zero-based; printed one-based ("1,3").
class SubproblemId {
 public:
  SubproblemId() = default;
  /// Validates: nonempty, strictly increasing, all < k.
  SubproblemId(std::vector<std::size_t> indices, std::size_t k);

  static SubproblemId full(std::size_t k);
  /// Parses a one-based list such as "1,3" or "1-3".
  static SubproblemId parse(const std::string& text, std::size_t k);

  const std::vector<std::size_t>& indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  bool contains(std::size_t i) const;
  bool is_subset_of(const SubproblemId& other) const;

  /// One-based, comma separated.
  std::string to_string(char sep = ',') const;

  friend auto operator<=>(const SubproblemId&, const SubproblemId&) = default;

 private:
  std::vector<std::size_t> indices_;
};

/// All subsets of {0..k-1} with the given size, lexicographic order.
std::vector<SubproblemId> subsets_of_size(std::size_t k, std::size_t size);

/// All nonempty subsets, ordered by size then lexicographically.
std::vector<SubproblemId> all_subsets(std::size_t k);

}  // namespace pareto
