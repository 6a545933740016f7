#include "dialoscope/text.hpp"

#include <array>
#include <cctype>
#include <fstream>

#include "dialoscope/errors.hpp"

namespace dialoscope {

namespace {

// Unicode Cf (format) code points, plus the BOM. Kept as sorted ranges.
struct CpRange {
  char32_t lo, hi;
};
constexpr std::array<CpRange, 20> kFormatRanges{{
    {0x00AD, 0x00AD},   {0x0600, 0x0605}, {0x061C, 0x061C},   {0x06DD, 0x06DD},
    {0x070F, 0x070F},   {0x08E2, 0x08E2}, {0x180E, 0x180E},   {0x200B, 0x200F},
    {0x202A, 0x202E},   {0x2060, 0x2064}, {0x2066, 0x206F},   {0xFEFF, 0xFEFF},
    {0xFFF9, 0xFFFB},   {0x110BD, 0x110BD}, {0x110CD, 0x110CD},
    {0x13430, 0x13438}, {0x1BCA0, 0x1BCA3}, {0x1D173, 0x1D17A},
    {0xE0001, 0xE0001}, {0xE0020, 0xE007F},
}};

bool is_format_char(char32_t cp) {
  for (const auto& r : kFormatRanges) {
    if (cp >= r.lo && cp <= r.hi) return true;
  }
  return false;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Decode one UTF-8 code point starting at i; on malformed input returns the
// raw byte value with length 1 and sets `raw` so it is copied through as-is.
char32_t decode_utf8(std::string_view s, std::size_t i, std::size_t& len, bool& raw) {
  raw = false;
  unsigned char b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) {
    len = 1;
    return b0;
  }
  int need = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    need = 1;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    need = 2;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    need = 3;
    cp = b0 & 0x07;
  } else {
    len = 1;
    raw = true;
    return b0;
  }
  if (i + static_cast<std::size_t>(need) >= s.size()) {
    len = 1;
    raw = true;
    return b0;
  }
  for (int k = 1; k <= need; ++k) {
    unsigned char b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) {
      len = 1;
      raw = true;
      return b0;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  len = static_cast<std::size_t>(need) + 1;
  return cp;
}

}  // namespace

std::string clean_text(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  std::size_t i = 0;
  while (i < raw.size()) {
    std::size_t len = 1;
    bool passthrough = false;
    char32_t cp = decode_utf8(raw, i, len, passthrough);
    if (passthrough) {
      out.push_back(raw[i]);
      i += len;
      continue;
    }
    if (cp == '\r') {
      if (i + 1 >= raw.size() || raw[i + 1] != '\n') out.push_back('\n');
      // CRLF: the LF that follows is emitted on its own
    } else if (cp == '\n' || cp == '\t') {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x20 || (cp >= 0x7F && cp <= 0x9F)) {
      // other Cc: drop
    } else if (is_format_char(cp)) {
      // Cf / BOM: drop
    } else if (cp == 0x00A0) {
      out.push_back(' ');
    } else if (cp == 0x2018 || cp == 0x2019 || cp == 0x201A || cp == 0x201B) {
      out.push_back('\'');
    } else if (cp == 0x201C || cp == 0x201D || cp == 0x201E || cp == 0x201F) {
      out.push_back('"');
    } else if ((cp >= 0x2010 && cp <= 0x2015) || cp == 0x2212) {
      out.push_back('-');
    } else {
      append_utf8(out, cp);
    }
    i += len;
  }
  return out;
}

std::size_t word_count(std::string_view text) {
  std::size_t count = 0;
  bool in_word = false;
  for (char c : text) {
    bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
    if (space) {
      in_word = false;
    } else if (!in_word) {
      in_word = true;
      ++count;
    }
  }
  return count;
}

namespace {

// NLTK-style English stopword list, shipped verbatim in data/stopwords_en.txt.
constexpr const char* kBuiltinStopwords[] = {
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "you're",
    "you've", "you'll", "you'd", "your", "yours", "yourself", "yourselves", "he",
    "him", "his", "himself", "she", "she's", "her", "hers", "herself", "it",
    "it's", "its", "itself", "they", "them", "their", "theirs", "themselves",
    "what", "which", "who", "whom", "this", "that", "that'll", "these", "those",
    "am", "is", "are", "was", "were", "be", "been", "being", "have", "has",
    "had", "having", "do", "does", "did", "doing", "a", "an", "the", "and",
    "but", "if", "or", "because", "as", "until", "while", "of", "at", "by",
    "for", "with", "about", "against", "between", "into", "through", "during",
    "before", "after", "above", "below", "to", "from", "up", "down", "in",
    "out", "on", "off", "over", "under", "again", "further", "then", "once",
    "here", "there", "when", "where", "why", "how", "all", "any", "both",
    "each", "few", "more", "most", "other", "some", "such", "no", "nor", "not",
    "only", "own", "same", "so", "than", "too", "very", "s", "t", "can",
    "will", "just", "don", "don't", "should", "should've", "now", "d", "ll",
    "m", "o", "re", "ve", "y", "ain", "aren", "aren't", "couldn", "couldn't",
    "didn", "didn't", "doesn", "doesn't", "hadn", "hadn't", "hasn", "hasn't",
    "haven", "haven't", "isn", "isn't", "ma", "mightn", "mightn't", "mustn",
    "mustn't", "needn", "needn't", "shan", "shan't", "shouldn", "shouldn't",
    "wasn", "wasn't", "weren", "weren't", "won", "won't", "wouldn", "wouldn't",
};

}  // namespace

const StopwordSet& StopwordSet::builtin() {
  static const StopwordSet instance = [] {
    StopwordSet s;
    for (const char* w : kBuiltinStopwords) s.insert(w);
    return s;
  }();
  return instance;
}

StopwordSet StopwordSet::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Error::Kind::Io, "cannot open stopword file " + path.string());
  StopwordSet s;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
      line.pop_back();
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    std::string token = line.substr(start);
    for (char& c : token) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    s.insert(std::move(token));
  }
  return s;
}

std::vector<std::string> tokenize(std::string_view text, const StopwordSet& stopwords) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      if (!stopwords.contains(current)) tokens.push_back(current);
      current.clear();
    }
  };
  for (char ch : text) {
    unsigned char b = static_cast<unsigned char>(ch);
    if (std::isalnum(b) || b >= 0x80) {
      current.push_back(static_cast<char>(std::tolower(b)));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

}  // namespace dialoscope
