#include "dialoscope/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>

#include "dialoscope/errors.hpp"

namespace dialoscope {

NoteStyle PipelineConfig::note_style() const {
  NoteStyle style;
  style.strict = ingest.strict;
  style.tab_width = ingest.tab_width;
  style.multi_party_separator = ingest.multi_party_separator;
  return style;
}

ReferenceSpec PipelineConfig::reference_spec() const {
  ReferenceSpec spec;
  spec.show_baseline = distance.show_baseline;
  if (distance.reference == "average") {
    spec.kind = ReferencePosition::Kind::Average;
  } else if (distance.reference.rfind("baseline:", 0) == 0) {
    spec.kind = ReferencePosition::Kind::Baseline;
    spec.baseline_party = distance.reference.substr(9);
    if (spec.baseline_party.empty()) {
      throw Error(Error::Kind::Config, "distance.reference: baseline needs a party name");
    }
  } else {
    throw Error(Error::Kind::Config,
                "distance.reference must be 'average' or 'baseline:<party>', got '" +
                    distance.reference + "'");
  }
  return spec;
}

PipelineConfig default_config() { return PipelineConfig{}; }

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw Error(Error::Kind::Config, "config: " + key + " expects a number, got '" + value + "'");
  }
}

long long parse_int(const std::string& key, const std::string& value) {
  long long v = 0;
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || p != value.data() + value.size()) {
    throw Error(Error::Kind::Config, "config: " + key + " expects an integer, got '" + value + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw Error(Error::Kind::Config, "config: " + key + " expects true/false, got '" + value + "'");
}

std::vector<std::string> parse_list(const std::string& value) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    std::size_t pos = value.find(',', start);
    std::string item = trim(value.substr(start, pos == std::string::npos ? pos : pos - start));
    if (!item.empty()) out.push_back(item);
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string join_list(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  return out;
}

}  // namespace

void apply_override(PipelineConfig& c, const std::string& key, const std::string& raw_value) {
  std::string value = trim(raw_value);
  if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
    value = value.substr(1, value.size() - 2);
  }

  // [paths]
  if (key == "paths.notes_dir") { c.paths.notes_dir = value; return; }
  if (key == "paths.corpus") { c.paths.corpus = value; return; }
  if (key == "paths.embeddings") { c.paths.embeddings = value; return; }
  if (key == "paths.contextual_vectors") { c.paths.contextual_vectors = value; return; }
  if (key == "paths.issues") { c.paths.issues = value; return; }
  if (key == "paths.labels") { c.paths.labels = value; return; }
  if (key == "paths.stopwords") { c.paths.stopwords = value; return; }
  if (key == "paths.allow_list") { c.paths.allow_list = value; return; }
  if (key == "paths.aliases") { c.paths.aliases = value; return; }
  if (key == "paths.abbreviations") { c.paths.abbreviations = value; return; }
  if (key == "paths.note_manifest") { c.paths.note_manifest = value; return; }
  if (key == "paths.output_dir") { c.paths.output_dir = value; return; }
  // [ingest]
  if (key == "ingest.filename_pattern") { c.ingest.filename_pattern = value; return; }
  if (key == "ingest.strict") { c.ingest.strict = parse_bool(key, value); return; }
  if (key == "ingest.tab_width") { c.ingest.tab_width = static_cast<int>(parse_int(key, value)); return; }
  if (key == "ingest.multi_party_separator") { c.ingest.multi_party_separator = value; return; }
  // [query]
  if (key == "query.base_sim") { c.query.base_sim = parse_double(key, value); return; }
  if (key == "query.max_sim") { c.query.max_sim = parse_double(key, value); return; }
  if (key == "query.overflow_count") { c.query.overflow_count = static_cast<std::size_t>(parse_int(key, value)); return; }
  if (key == "query.step") { c.query.step = parse_double(key, value); return; }
  // [nmf]
  if (key == "nmf.n_topics") { c.nmf.n_topics = static_cast<int>(parse_int(key, value)); return; }
  if (key == "nmf.alpha") { c.nmf.alpha = parse_double(key, value); return; }
  if (key == "nmf.l1_ratio") { c.nmf.l1_ratio = parse_double(key, value); return; }
  if (key == "nmf.tol") { c.nmf.tol = parse_double(key, value); return; }
  if (key == "nmf.max_iter") { c.nmf.max_iter = static_cast<int>(parse_int(key, value)); return; }
  if (key == "nmf.max_features") { c.nmf.max_features = static_cast<std::size_t>(parse_int(key, value)); return; }
  if (key == "nmf.max_df") { c.nmf.max_df = parse_double(key, value); return; }
  if (key == "nmf.membership_threshold") { c.nmf.membership_threshold = parse_double(key, value); return; }
  if (key == "nmf.seed") { c.nmf.seed = static_cast<std::uint64_t>(parse_int(key, value)); return; }
  if (key == "nmf.keywords") { c.nmf.n_keywords = static_cast<int>(parse_int(key, value)); return; }
  if (key == "nmf.top_comments") { c.nmf.top_comments = static_cast<int>(parse_int(key, value)); return; }
  // [distance]
  if (key == "distance.parties") { c.distance.parties = parse_list(value); return; }
  if (key == "distance.reference") { c.distance.reference = value; return; }
  if (key == "distance.show_baseline") { c.distance.show_baseline = parse_bool(key, value); return; }
  if (key == "distance.period") {
    if (value == "year") { c.distance.period = PeriodGranularity::Year; return; }
    if (value == "year-month") { c.distance.period = PeriodGranularity::YearMonth; return; }
    throw Error(Error::Kind::Config, "config: distance.period must be year or year-month");
  }
  if (key == "distance.fraction") { c.distance.fraction = parse_double(key, value); return; }
  if (key == "distance.n_resamples") { c.distance.n_resamples = static_cast<int>(parse_int(key, value)); return; }
  if (key == "distance.seed") { c.distance.seed = static_cast<std::uint64_t>(parse_int(key, value)); return; }
  if (key == "distance.chunk_limit") { c.distance.chunk_limit = static_cast<std::size_t>(parse_int(key, value)); return; }
  if (key == "distance.weighting") {
    if (value == "tokens") { c.distance.weight_by_tokens = true; return; }
    if (value == "comments") { c.distance.weight_by_tokens = false; return; }
    throw Error(Error::Kind::Config, "config: distance.weighting must be tokens or comments");
  }
  // [stages]
  if (key == "stages.predefined") { c.stages.predefined = parse_bool(key, value); return; }
  if (key == "stages.topics") { c.stages.topics = parse_bool(key, value); return; }
  if (key == "stages.distances") { c.stages.distances = parse_bool(key, value); return; }
  if (key == "stages.charts") { c.stages.charts = parse_bool(key, value); return; }

  throw Error(Error::Kind::Config, "config: unknown key '" + key + "'");
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Error::Kind::Io, "cannot open config " + path.string());
  PipelineConfig config = default_config();

  std::string line, section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ParseError("config: unterminated section header", line_no);
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty()) throw ParseError("config: empty section name", line_no);
      continue;
    }
    std::size_t eq = t.find('=');
    if (eq == std::string::npos) throw ParseError("config: expected key = value", line_no);
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    // strip a trailing comment unless the value is quoted
    if (!(value.size() >= 2 && value.front() == '"')) {
      std::size_t hash = value.find(" #");
      if (hash != std::string::npos) value = trim(value.substr(0, hash));
    }
    if (key.empty()) throw ParseError("config: empty key", line_no);
    if (section.empty()) throw ParseError("config: key outside any [section]", line_no);
    try {
      apply_override(config, section + "." + key, value);
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return config;
}

std::map<std::string, std::string> config_snapshot(const PipelineConfig& c) {
  std::map<std::string, std::string> snap;
  snap["paths.notes_dir"] = c.paths.notes_dir.string();
  snap["paths.corpus"] = c.paths.corpus.string();
  snap["paths.embeddings"] = c.paths.embeddings.string();
  snap["paths.contextual_vectors"] = c.paths.contextual_vectors.string();
  snap["paths.issues"] = c.paths.issues.string();
  snap["paths.labels"] = c.paths.labels.string();
  snap["paths.stopwords"] = c.paths.stopwords.string();
  snap["paths.allow_list"] = c.paths.allow_list.string();
  snap["paths.aliases"] = c.paths.aliases.string();
  snap["paths.abbreviations"] = c.paths.abbreviations.string();
  snap["paths.note_manifest"] = c.paths.note_manifest.string();
  snap["paths.output_dir"] = c.paths.output_dir.string();
  snap["ingest.filename_pattern"] = c.ingest.filename_pattern;
  snap["ingest.strict"] = c.ingest.strict ? "true" : "false";
  snap["ingest.tab_width"] = std::to_string(c.ingest.tab_width);
  snap["ingest.multi_party_separator"] = c.ingest.multi_party_separator;
  snap["query.base_sim"] = format_double(c.query.base_sim);
  snap["query.max_sim"] = format_double(c.query.max_sim);
  snap["query.overflow_count"] = std::to_string(c.query.overflow_count);
  snap["query.step"] = format_double(c.query.step);
  snap["nmf.n_topics"] = std::to_string(c.nmf.n_topics);
  snap["nmf.alpha"] = format_double(c.nmf.alpha);
  snap["nmf.l1_ratio"] = format_double(c.nmf.l1_ratio);
  snap["nmf.tol"] = format_double(c.nmf.tol);
  snap["nmf.max_iter"] = std::to_string(c.nmf.max_iter);
  snap["nmf.max_features"] = std::to_string(c.nmf.max_features);
  snap["nmf.max_df"] = format_double(c.nmf.max_df);
  snap["nmf.membership_threshold"] = format_double(c.nmf.membership_threshold);
  snap["nmf.seed"] = std::to_string(c.nmf.seed);
  snap["nmf.keywords"] = std::to_string(c.nmf.n_keywords);
  snap["nmf.top_comments"] = std::to_string(c.nmf.top_comments);
  snap["distance.parties"] = join_list(c.distance.parties);
  snap["distance.reference"] = c.distance.reference;
  snap["distance.show_baseline"] = c.distance.show_baseline ? "true" : "false";
  snap["distance.period"] = c.distance.period == PeriodGranularity::Year ? "year" : "year-month";
  snap["distance.fraction"] = format_double(c.distance.fraction);
  snap["distance.n_resamples"] = std::to_string(c.distance.n_resamples);
  snap["distance.seed"] = std::to_string(c.distance.seed);
  snap["distance.chunk_limit"] = std::to_string(c.distance.chunk_limit);
  snap["distance.weighting"] = c.distance.weight_by_tokens ? "tokens" : "comments";
  snap["stages.predefined"] = c.stages.predefined ? "true" : "false";
  snap["stages.topics"] = c.stages.topics ? "true" : "false";
  snap["stages.distances"] = c.stages.distances ? "true" : "false";
  snap["stages.charts"] = c.stages.charts ? "true" : "false";
  return snap;
}

}  // namespace dialoscope
