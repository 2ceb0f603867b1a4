#pragma once

#include <array>
#include <cstddef>
#include <string>

#include "motivescan/error.hpp"

namespace motivescan {

// Label space of the classifier: a motive code crossed with a self-regulatory
// level. Motives are ordered 0 (null), A (affiliation), F (freedom),
// L (achievement/"Leistung"), M (power/"Macht"); levels run 0..5. The flat
// class index is motive_index * 6 + level, giving 30 classes total.
inline constexpr std::array<char, 5> kMotiveCodes = {'0', 'A', 'F', 'L', 'M'};
inline constexpr int kNumMotives = 5;
inline constexpr int kNumLevels = 6;
inline constexpr int kNumClasses = kNumMotives * kNumLevels;

struct Label {
  int motive = 0;  // index into kMotiveCodes
  int level = 0;   // 0..5

  bool operator==(const Label&) const = default;
};

inline int motive_index(char code) {
  for (int i = 0; i < kNumMotives; ++i)
    if (kMotiveCodes[static_cast<std::size_t>(i)] == code) return i;
  throw MotiveError(std::string("unknown motive code: '") + code + "'");
}

inline Label make_label(char motive_code, int level) {
  if (level < 0 || level >= kNumLevels)
    throw MotiveError("level out of range: " + std::to_string(level));
  return Label{motive_index(motive_code), level};
}

inline int label_to_index(const Label& label) {
  if (label.motive < 0 || label.motive >= kNumMotives ||
      label.level < 0 || label.level >= kNumLevels)
    throw MotiveError("label out of range");
  return label.motive * kNumLevels + label.level;
}

inline Label index_to_label(int index) {
  if (index < 0 || index >= kNumClasses)
    throw MotiveError("class index out of range: " + std::to_string(index));
  return Label{index / kNumLevels, index % kNumLevels};
}

// Textual form used in data files and reports, e.g. "M4" or "00".
inline std::string label_to_string(const Label& label) {
  std::string s;
  s += kMotiveCodes[static_cast<std::size_t>(label.motive)];
  s += static_cast<char>('0' + label.level);
  return s;
}

inline Label parse_label(const std::string& text) {
  if (text.size() != 2)
    throw MotiveError("bad label '" + text + "': expected motive char + level digit");
  char lv = text[1];
  if (lv < '0' || lv > '5')
    throw MotiveError("bad label '" + text + "': level must be 0..5");
  return make_label(text[0], lv - '0');
}

}  // namespace motivescan
