#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "acaug/error.hpp"

namespace acaug {

using Tokens = std::vector<std::string>;

struct WerBreakdown {
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t ref_words = 0;
  double wer = 0.0;

  std::size_t errors() const noexcept { return substitutions + deletions + insertions; }
  friend bool operator==(const WerBreakdown&, const WerBreakdown&) = default;
};

/// Lowercases ASCII, turns punctuation into spaces (keeping apostrophes
/// between two word characters) and splits on whitespace. Bytes >= 0x80
/// are kept as word characters.
inline Tokens normalize_text(std::string_view s) {
  auto is_word = [](unsigned char c) { return std::isalnum(c) || c >= 0x80; };
  std::string cleaned;
  cleaned.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto c = static_cast<unsigned char>(s[i]);
    if (is_word(c)) {
      cleaned.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
    } else if (c == '\'' && i > 0 && i + 1 < s.size() && is_word(static_cast<unsigned char>(s[i - 1])) &&
               is_word(static_cast<unsigned char>(s[i + 1]))) {
      cleaned.push_back('\'');
    } else {
      cleaned.push_back(' ');
    }
  }
  Tokens out;
  std::size_t i = 0;
  while (i < cleaned.size()) {
    while (i < cleaned.size() && cleaned[i] == ' ') ++i;
    std::size_t j = i;
    while (j < cleaned.size() && cleaned[j] != ' ') ++j;
    if (j > i) out.emplace_back(cleaned.substr(i, j - i));
    i = j;
  }
  return out;
}

/// Unit-cost Levenshtein distance over tokens.
inline std::size_t edit_distance(const Tokens& a, const Tokens& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1), prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

/// Minimum-edit alignment of hypothesis against reference. When several
/// alignments are optimal, the backtrace prefers match/substitution, then
/// insertion, then deletion.
inline WerBreakdown wer(const Tokens& reference, const Tokens& hypothesis) {
  if (reference.empty()) throw Error("wer: empty reference");
  const std::size_t n = reference.size(), m = hypothesis.size();
  std::vector<std::size_t> d((n + 1) * (m + 1));
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return d[i * (m + 1) + j]; };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = i;
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t diag = at(i - 1, j - 1) + (reference[i - 1] == hypothesis[j - 1] ? 0 : 1);
      at(i, j) = std::min({diag, at(i, j - 1) + 1, at(i - 1, j) + 1});
    }
  }

  WerBreakdown out;
  out.ref_words = n;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool same = reference[i - 1] == hypothesis[j - 1];
      if (at(i, j) == at(i - 1, j - 1) + (same ? 0 : 1)) {
        if (!same) ++out.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (j > 0 && at(i, j) == at(i, j - 1) + 1) {
      ++out.insertions;
      --j;
    } else {
      ++out.deletions;
      --i;
    }
  }
  out.wer = static_cast<double>(out.errors()) / static_cast<double>(n);
  return out;
}

inline WerBreakdown wer(std::string_view reference, std::string_view hypothesis) {
  return wer(normalize_text(reference), normalize_text(hypothesis));
}

/// Corpus WER from pooled counts, sum(S + D + I) / sum(ref words).
/// Pairs with an empty reference contribute their insertions only.
inline WerBreakdown aggregate_wer(const std::vector<std::pair<Tokens, Tokens>>& pairs) {
  WerBreakdown total;
  for (const auto& [ref, hyp] : pairs) {
    if (ref.empty()) {
      total.insertions += hyp.size();
      continue;
    }
    const auto w = wer(ref, hyp);
    total.substitutions += w.substitutions;
    total.deletions += w.deletions;
    total.insertions += w.insertions;
    total.ref_words += w.ref_words;
  }
  if (total.ref_words == 0) throw Error("aggregate_wer: all references are empty");
  total.wer = static_cast<double>(total.errors()) / static_cast<double>(total.ref_words);
  return total;
}

}  // namespace acaug
