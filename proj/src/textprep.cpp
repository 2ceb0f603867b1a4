#include "motivescan/textprep.hpp"

#include "motivescan/error.hpp"
#include "motivescan/io_util.hpp"

namespace motivescan {

namespace utf8 {

// Tolerant decoder: well-formed sequences become codepoints, malformed bytes
// are skipped. Overlong encodings and surrogate halves are rejected as
// malformed.
std::vector<std::uint32_t> decode(std::string_view bytes) {
  std::vector<std::uint32_t> out;
  out.reserve(bytes.size());
  std::size_t i = 0;
  while (i < bytes.size()) {
    auto b0 = static_cast<unsigned char>(bytes[i]);
    if (b0 < 0x80) {
      out.push_back(b0);
      ++i;
      continue;
    }
    int len;
    std::uint32_t cp;
    if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    } else {
      ++i;  // stray continuation or invalid lead byte
      continue;
    }
    if (i + static_cast<std::size_t>(len) > bytes.size()) {
      ++i;
      continue;
    }
    bool ok = true;
    for (int k = 1; k < len; ++k) {
      auto b = static_cast<unsigned char>(bytes[i + static_cast<std::size_t>(k)]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (b & 0x3F);
    }
    if (!ok) {
      ++i;
      continue;
    }
    // Reject overlong forms, surrogates and out-of-range values.
    static constexpr std::uint32_t kMin[5] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      ++i;
      continue;
    }
    out.push_back(cp);
    i += static_cast<std::size_t>(len);
  }
  return out;
}

void encode_append(std::uint32_t cp, std::string& out) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

std::string encode(const std::vector<std::uint32_t>& cps) {
  std::string out;
  out.reserve(cps.size());
  for (std::uint32_t cp : cps) encode_append(cp, out);
  return out;
}

}  // namespace utf8

bool is_space_cp(std::uint32_t cp) {
  switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0x85:    // NEL
    case 0xA0:    // no-break space
    case 0x1680:  // ogham space mark
    case 0x2028:  // line separator
    case 0x2029:  // paragraph separator
    case 0x202F:  // narrow no-break space
    case 0x205F:  // medium mathematical space
    case 0x3000:  // ideographic space
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;  // en quad .. hair space
  }
}

bool is_digit_cp(std::uint32_t cp) {
  return (cp >= '0' && cp <= '9') ||
         (cp >= 0xFF10 && cp <= 0xFF19);  // fullwidth digits
}

// Emoji and pictographic codepoints removed by normalize(). Block-based
// inventory:
//   U+1F000..U+1FBFF  mahjong/domino/cards, enclosed alphanumerics (incl.
//                     regional indicator flags), pictographs, emoticons,
//                     transport, supplemental symbols, extended-A/B, legacy
//                     computing
//   U+2600..U+27BF    miscellaneous symbols + dingbats
//   U+2B00..U+2BFF    miscellaneous symbols and arrows (stars, squares)
//   U+FE00..U+FE0F    variation selectors (emoji presentation)
//   U+200D            zero-width joiner (emoji sequences)
//   U+20E3            combining enclosing keycap
//   U+00A9, U+00AE, U+2122   (c), (r), tm
bool is_emoji_cp(std::uint32_t cp) {
  return (cp >= 0x1F000 && cp <= 0x1FBFF) || (cp >= 0x2600 && cp <= 0x27BF) ||
         (cp >= 0x2B00 && cp <= 0x2BFF) || (cp >= 0xFE00 && cp <= 0xFE0F) ||
         cp == 0x200D || cp == 0x20E3 || cp == 0xA9 || cp == 0xAE ||
         cp == 0x2122;
}

// Punctuation stripped from token edges: ASCII punctuation, Latin-1
// punctuation/symbol marks, and the general punctuation block (quotes,
// dashes, ellipsis, daggers, primes, ...).
bool is_punct_cp(std::uint32_t cp) {
  if (cp < 0x80) {
    return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
           (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
  }
  switch (cp) {
    case 0xA1:   // inverted exclamation
    case 0xA6:   // broken bar
    case 0xAB:   // left guillemet
    case 0xB7:   // middle dot
    case 0xBB:   // right guillemet
    case 0xBF:   // inverted question mark
      return true;
    default:
      return cp >= 0x2010 && cp <= 0x205E;  // general punctuation block
  }
}

// Table-based lowercasing for the scripts that matter in the target corpora:
// ASCII, Latin-1, Latin Extended-A, Greek, Cyrillic. Codepoints outside these
// tables pass through unchanged.
std::uint32_t lower_cp(std::uint32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;  // Latin-1
  if (cp >= 0x0100 && cp <= 0x0137) return (cp % 2 == 0) ? cp + 1 : cp;
  if (cp >= 0x0139 && cp <= 0x0148) return (cp % 2 == 1) ? cp + 1 : cp;
  if (cp >= 0x014A && cp <= 0x0177) return (cp % 2 == 0) ? cp + 1 : cp;
  if (cp == 0x0178) return 0xFF;  // Y with diaeresis pairs outside the block
  if (cp >= 0x0179 && cp <= 0x017E) return (cp % 2 == 1) ? cp + 1 : cp;
  if (cp == 0x1E9E) return 0xDF;  // capital sharp s
  if (cp >= 0x0391 && cp <= 0x03A9 && cp != 0x03A2) return cp + 0x20;  // Greek
  if (cp == 0x0386) return 0x03AC;
  if (cp >= 0x0388 && cp <= 0x038A) return cp + 0x25;
  if (cp == 0x038C) return 0x03CC;
  if (cp == 0x038E || cp == 0x038F) return cp + 0x3F;
  if (cp >= 0x0410 && cp <= 0x042F) return cp + 0x20;  // Cyrillic
  if (cp >= 0x0400 && cp <= 0x040F) return cp + 0x50;
  return cp;
}

namespace {

// Applies the per-codepoint stage of normalize: lowercase, fold umlauts and
// eszett, drop digits and emoji. Appends the mapped text to out.
void map_codepoint(std::uint32_t cp, std::string& out) {
  cp = lower_cp(cp);
  if (is_digit_cp(cp) || is_emoji_cp(cp)) return;
  switch (cp) {
    case 0xE4:  // ae
      out += "ae";
      return;
    case 0xF6:  // oe
      out += "oe";
      return;
    case 0xFC:  // ue
      out += "ue";
      return;
    case 0xDF:  // ss
      out += "ss";
      return;
    default:
      utf8::encode_append(cp, out);
  }
}

bool is_dropped_chunk(std::string_view chunk) {
  return starts_with(chunk, "#") || starts_with(chunk, "@") ||
         starts_with(chunk, "http://") || starts_with(chunk, "https://") ||
         starts_with(chunk, "www.");
}

}  // namespace

std::string normalize(std::string_view text) {
  // Stage 1: codepoint mapping over the whole input. Running this before the
  // chunk filter keeps the function idempotent: a chunk like "1#tag" becomes
  // "#tag" here and is then dropped below, instead of surviving one pass.
  std::vector<std::uint32_t> cps = utf8::decode(text);
  std::string mapped;
  mapped.reserve(text.size());
  for (std::uint32_t cp : cps) {
    if (is_space_cp(cp)) {
      mapped += ' ';
    } else {
      map_codepoint(cp, mapped);
    }
  }

  // Stage 2: split on whitespace, drop URL/#hashtag/@mention chunks, rejoin
  // with single spaces (this is also the whitespace collapse).
  std::string out;
  out.reserve(mapped.size());
  std::size_t i = 0;
  while (i < mapped.size()) {
    while (i < mapped.size() && mapped[i] == ' ') ++i;
    std::size_t start = i;
    while (i < mapped.size() && mapped[i] != ' ') ++i;
    if (i == start) break;
    std::string_view chunk(mapped.data() + start, i - start);
    if (is_dropped_chunk(chunk)) continue;
    if (!out.empty()) out += ' ';
    out.append(chunk);
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view normalized) {
  std::vector<std::string> tokens;
  for (const std::string& raw : split_whitespace(normalized)) {
    std::vector<std::uint32_t> cps = utf8::decode(raw);
    std::size_t lo = 0;
    std::size_t hi = cps.size();
    while (lo < hi && is_punct_cp(cps[lo])) ++lo;
    while (hi > lo && is_punct_cp(cps[hi - 1])) --hi;
    if (lo == hi) continue;  // punctuation-only token
    std::string token;
    for (std::size_t k = lo; k < hi; ++k) utf8::encode_append(cps[k], token);
    tokens.push_back(std::move(token));
  }
  return tokens;
}

std::vector<std::string> remove_stopwords(std::vector<std::string> tokens,
                                          const StopWordList& stop) {
  std::vector<std::string> kept;
  kept.reserve(tokens.size());
  for (std::string& tok : tokens)
    if (!stop.contains(tok)) kept.push_back(std::move(tok));
  return kept;
}

TokenSequence truncate_primacy(std::vector<std::string> tokens,
                               std::size_t max_len) {
  if (max_len < 1) throw MotiveError("truncate_primacy: max_len must be >= 1");
  TokenSequence seq;
  seq.original_length = tokens.size();
  if (tokens.size() > max_len) tokens.resize(max_len);
  seq.tokens = std::move(tokens);
  return seq;
}

StopWordList load_stopwords(const std::string& path) {
  StopWordList list;
  for (const std::string& line : read_lines(path)) {
    std::string_view sv = trim(line);
    if (sv.empty() || sv.front() == '#') continue;
    std::string word = normalize(sv);
    if (!word.empty()) list.entries.insert(std::move(word));
  }
  if (list.entries.empty())
    throw MotiveError("stop-word file has no usable entries: " + path);
  return list;
}

TokenSequence prep_classifier_tokens(std::string_view text,
                                     const StopWordList& stop,
                                     std::size_t max_len) {
  return truncate_primacy(remove_stopwords(tokenize(normalize(text)), stop),
                          max_len);
}

std::vector<std::string> prep_full_tokens(std::string_view text) {
  return tokenize(normalize(text));
}

}  // namespace motivescan
