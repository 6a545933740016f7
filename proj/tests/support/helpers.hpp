#pragma once

// Shared test fixtures: temp directories, synthetic corpora and embedding
// tables, and the XML well-formedness oracle used for SVG output.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "dialoscope/corpus.hpp"
#include "dialoscope/embedding.hpp"

namespace testsupport {

class TempDir {
public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("dialoscope_" + tag + "_" + std::to_string(counter_++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path file(const std::string& name) const { return path_ / name; }

private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

/// Synthetic vocabulary word: w000, w001, ...
inline std::string word(int i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "w%03d", i);
  return buf;
}

/// Random corpus over a synthetic vocabulary; Zipf-ish token choice.
inline dialoscope::Corpus random_corpus(std::mt19937_64& rng, std::size_t n_comments,
                                        int vocab = 200,
                                        const std::vector<std::string>& parties = {"P1", "P2",
                                                                                   "P3", "P4"},
                                        double multi_org_rate = 0.0) {
  dialoscope::Corpus corpus;
  std::uniform_int_distribution<int> year_of(2018, 2019);
  std::uniform_int_distribution<int> month_of(1, 12);
  std::uniform_int_distribution<int> length_of(5, 40);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < n_comments; ++i) {
    dialoscope::Comment c;
    c.comment_id = static_cast<std::int64_t>(i);
    c.year = year_of(rng);
    c.month = month_of(rng);
    c.source_file = "synthetic.txt";
    std::size_t party = static_cast<std::size_t>(rng() % parties.size());
    c.participant_name = parties[party] + " Rep";
    c.participant_org = parties[party];
    if (unit(rng) < multi_org_rate && parties.size() > 1) {
      std::size_t other = (party + 1 + rng() % (parties.size() - 1)) % parties.size();
      c.multi_org = {parties[party], parties[other]};
    }
    int len = length_of(rng);
    std::string text;
    for (int t = 0; t < len; ++t) {
      if (t) text.push_back(' ');
      // squared uniform skews toward low indices (frequent words)
      double u = unit(rng);
      text += word(static_cast<int>(u * u * vocab));
    }
    c.text = text;
    corpus.comments.push_back(std::move(c));
  }
  return corpus;
}

/// Random embedding table over terms w000..w(n-1), components ~ N(0,1).
inline dialoscope::EmbeddingTable random_table(std::mt19937_64& rng, int n_terms, int dim,
                                               const std::string& tag = "random") {
  dialoscope::EmbeddingTable table(0, tag);
  std::normal_distribution<float> gauss(0.f, 1.f);
  std::vector<float> components(static_cast<std::size_t>(dim));
  for (int i = 0; i < n_terms; ++i) {
    for (auto& x : components) x = gauss(rng);
    table.add(word(i), components);
  }
  return table;
}

/// Write a table in the standard `term v1 ... vd` text format.
inline void write_table_file(const std::filesystem::path& path,
                             const dialoscope::EmbeddingTable& table) {
  std::ofstream out(path, std::ios::binary);
  char buf[32];
  for (std::size_t row = 0; row < table.size(); ++row) {
    out << table.term(row);
    for (float v : table.vector(row)) {
      std::snprintf(buf, sizeof buf, "%.6g", static_cast<double>(v));
      out << ' ' << buf;
    }
    out << '\n';
  }
}

/// Minimal XML well-formedness check: balanced tags, quoted attributes, no
/// stray '<'/'&' in character data. Returns an empty string when valid,
/// otherwise a description of the first problem.
inline std::string xml_check(const std::string& doc) {
  std::vector<std::string> stack;
  std::size_t i = 0;
  auto fail = [&](const std::string& what) {
    return what + " at offset " + std::to_string(i);
  };
  while (i < doc.size()) {
    char c = doc[i];
    if (c == '<') {
      if (i + 1 >= doc.size()) return fail("dangling '<'");
      if (doc[i + 1] == '?') {  // prolog / PI
        std::size_t end = doc.find("?>", i);
        if (end == std::string::npos) return fail("unterminated processing instruction");
        i = end + 2;
        continue;
      }
      if (doc.compare(i + 1, 3, "!--") == 0) {
        std::size_t end = doc.find("-->", i);
        if (end == std::string::npos) return fail("unterminated comment");
        i = end + 3;
        continue;
      }
      bool closing = doc[i + 1] == '/';
      std::size_t pos = i + (closing ? 2 : 1);
      std::string name;
      while (pos < doc.size() &&
             (std::isalnum(static_cast<unsigned char>(doc[pos])) || doc[pos] == ':' ||
              doc[pos] == '-' || doc[pos] == '_')) {
        name.push_back(doc[pos++]);
      }
      if (name.empty()) return fail("missing tag name");
      // attributes
      bool self_closing = false;
      while (pos < doc.size() && doc[pos] != '>') {
        if (doc[pos] == '/' && pos + 1 < doc.size() && doc[pos + 1] == '>') {
          self_closing = true;
          ++pos;
          break;
        }
        if (doc[pos] == '"') {
          std::size_t end = doc.find('"', pos + 1);
          if (end == std::string::npos) return fail("unterminated attribute value");
          pos = end;
        }
        if (doc[pos] == '<') return fail("'<' inside tag");
        ++pos;
      }
      if (pos >= doc.size()) return fail("unterminated tag");
      if (closing) {
        if (self_closing) return fail("closing tag cannot self-close");
        if (stack.empty() || stack.back() != name) return fail("mismatched </" + name + ">");
        stack.pop_back();
      } else if (!self_closing) {
        stack.push_back(name);
      }
      i = pos + 1;
    } else if (c == '&') {
      std::size_t end = doc.find(';', i);
      if (end == std::string::npos || end - i > 8) return fail("bare '&'");
      std::string entity = doc.substr(i + 1, end - i - 1);
      if (entity != "amp" && entity != "lt" && entity != "gt" && entity != "quot" &&
          entity != "apos" && (entity.empty() || entity[0] != '#')) {
        return fail("unknown entity &" + entity + ";");
      }
      i = end + 1;
    } else if (c == '>') {
      return fail("bare '>'");
    } else {
      ++i;
    }
  }
  if (!stack.empty()) return "unclosed <" + stack.back() + ">";
  return "";
}

}  // namespace testsupport
