#include "pareto/subproblem.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <stdexcept>

namespace pareto {

SubproblemId::SubproblemId(std::vector<std::size_t> indices, std::size_t k)
    : indices_(std::move(indices)) {
  if (indices_.empty()) throw std::invalid_argument("subproblem: empty index set");
  for (std::size_t j = 0; j < indices_.size(); ++j) {
    if (indices_[j] >= k)
      throw std::invalid_argument("subproblem: index " + std::to_string(indices_[j] + 1) +
                                  " exceeds k = " + std::to_string(k));
    if (j > 0 && indices_[j] <= indices_[j - 1])
      throw std::invalid_argument("subproblem: indices must be distinct and increasing");
  }
}

SubproblemId SubproblemId::full(std::size_t k) {
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return SubproblemId(std::move(idx), k);
}

SubproblemId SubproblemId::parse(const std::string& text, std::size_t k) {
  std::vector<std::size_t> idx;
  auto number = [&](std::string_view s) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || v == 0)
      throw std::invalid_argument("subproblem: bad index '" + std::string(s) + "'");
    return v - 1;
  };
  std::string_view rest = text;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    std::string_view item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    const auto dash = item.find('-');
    if (dash == std::string_view::npos) {
      idx.push_back(number(item));
    } else {
      const std::size_t a = number(item.substr(0, dash));
      const std::size_t b = number(item.substr(dash + 1));
      if (b < a) throw std::invalid_argument("subproblem: empty range");
      for (std::size_t i = a; i <= b; ++i) idx.push_back(i);
    }
  }
  std::sort(idx.begin(), idx.end());
  if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
    throw std::invalid_argument("subproblem: duplicate index");
  return SubproblemId(std::move(idx), k);
}

bool SubproblemId::contains(std::size_t i) const {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

bool SubproblemId::is_subset_of(const SubproblemId& other) const {
  return std::includes(other.indices_.begin(), other.indices_.end(), indices_.begin(),
                       indices_.end());
}

std::string SubproblemId::to_string(char sep) const {
  std::string out;
  for (std::size_t j = 0; j < indices_.size(); ++j) {
    if (j > 0) out += sep;
    out += std::to_string(indices_[j] + 1);
  }
  return out;
}

std::vector<SubproblemId> subsets_of_size(std::size_t k, std::size_t size) {
  std::vector<SubproblemId> out;
  if (size == 0 || size > k) return out;
  std::vector<std::size_t> c(size);
  std::iota(c.begin(), c.end(), std::size_t{0});
  for (;;) {
    out.emplace_back(c, k);
    std::size_t i = size;
    while (i-- > 0) {
      if (c[i] < k - size + i) break;
      if (i == 0) return out;
    }
    ++c[i];
    for (std::size_t j = i + 1; j < size; ++j) c[j] = c[j - 1] + 1;
  }
}

std::vector<SubproblemId> all_subsets(std::size_t k) {
  std::vector<SubproblemId> out;
  for (std::size_t s = 1; s <= k; ++s) {
    auto level = subsets_of_size(k, s);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

}  // namespace pareto
