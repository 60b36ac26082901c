#include "sobolcap/subset.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "sobolcap/error.hpp"

namespace sobolcap {

CriteriaIndex::CriteriaIndex(int m) : m_(m) {
  if (m < 1 || m > kMaxCriteria) {
    throw ArgumentError("criteria count must be in 1.." + std::to_string(kMaxCriteria) + ", got " +
                        std::to_string(m));
  }
}

void CriteriaIndex::check_criterion(int criterion) const {
  if (criterion < 1 || criterion > m_) {
    throw ArgumentError("criterion " + std::to_string(criterion) + " out of range 1.." +
                        std::to_string(m_));
  }
}

std::vector<Subset> CriteriaIndex::of_cardinality(int k) const {
  std::vector<Subset> out;
  for (Subset s = 0; s < subset_count(); ++s) {
    if (cardinality(s) == k) {
      out.push_back(s);
    }
  }
  // Lexicographic order on sorted members equals ascending order of the
  // bit-reversed mask, so compare the member lists directly.
  std::sort(out.begin(), out.end(), [](Subset a, Subset b) { return members(a) < members(b); });
  return out;
}

std::vector<Subset> CriteriaIndex::display_order() const {
  std::vector<Subset> out;
  out.reserve(subset_count());
  for (int k = 0; k <= m_; ++k) {
    const auto level = of_cardinality(k);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

std::vector<int> members(Subset s) {
  std::vector<int> out;
  for (int j = 1; s != 0; ++j, s >>= 1) {
    if (s & 1u) {
      out.push_back(j);
    }
  }
  return out;
}

std::string format_subset(Subset s) {
  std::string out;
  for (int j : members(s)) {
    if (!out.empty()) {
      out += ',';
    }
    out += std::to_string(j);
  }
  return out;
}

Subset parse_subset(const std::string& text, int m) {
  const CriteriaIndex index(m);
  std::string cleaned;
  for (char c : text) {
    if (c != '{' && c != '}' && !std::isspace(static_cast<unsigned char>(c))) {
      cleaned += c;
    }
  }
  Subset out = 0;
  if (cleaned.empty()) {
    return out;
  }
  std::istringstream in(cleaned);
  std::string item;
  while (std::getline(in, item, ',')) {
    int j = 0;
    try {
      std::size_t used = 0;
      j = std::stoi(item, &used);
      if (used != item.size()) {
        throw ParseError("");
      }
    } catch (const std::exception&) {
      throw ParseError("bad subset '" + text + "'");
    }
    index.check_criterion(j);
    out |= singleton(j);
  }
  return out;
}

}  // namespace sobolcap
