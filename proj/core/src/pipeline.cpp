#include "dialoscope/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <memory>
#include <set>

#include <json.hpp>

#include "dialoscope/csv.hpp"
#include "dialoscope/errors.hpp"
#include "dialoscope/hash.hpp"
#include "dialoscope/svg.hpp"

namespace dialoscope {

namespace {

using nlohmann::json;

std::string hex64(std::uint64_t value) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string sanitize_filename(const std::string& name) {
  std::string out;
  out.reserve(name.size());
  for (char c : name) {
    unsigned char b = static_cast<unsigned char>(c);
    out.push_back(std::isalnum(b) ? static_cast<char>(std::tolower(b)) : '_');
  }
  return out;
}

/// Tracks inputs, outputs, and stage statuses; written last (or on failure).
class Manifest {
public:
  explicit Manifest(const PipelineConfig& config) {
    doc_["tool"] = "dialoscope";
    doc_["format"] = 1;
    for (const auto& [key, value] : config_snapshot(config)) {
      // where outputs land is not part of the run identity
      if (key == "paths.output_dir") continue;
      doc_["parameters"][key] = value;
    }
    doc_["inputs"] = json::object();
    doc_["outputs"] = json::object();
  }

  void add_input(const std::filesystem::path& path) {
    if (path.empty()) return;
    doc_["inputs"][path.string()] = file_hash(path);
  }
  void add_output(const std::filesystem::path& run_dir, const std::filesystem::path& path) {
    doc_["outputs"][std::filesystem::relative(path, run_dir).generic_string()] = file_hash(path);
  }
  void set_stage(const std::string& name, const std::string& status) {
    for (auto& s : stages_) {
      if (s.name == name) {
        s.status = status;
        return;
      }
    }
    stages_.push_back({name, status});
  }
  const std::vector<StageStatus>& stages() const { return stages_; }

  void write(const std::filesystem::path& path) const {
    json out = doc_;
    out["stages"] = json::array();
    for (const auto& s : stages_) {
      out["stages"].push_back({{"name", s.name}, {"status", s.status}});
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error(Error::Kind::Io, "cannot write manifest " + path.string());
    file << out.dump(2) << '\n';
  }

private:
  json doc_;
  std::vector<StageStatus> stages_;
};

struct ChartJob {
  std::filesystem::path path;
  ChartSpec spec;
  ChartData data;
};

void write_svg(const std::filesystem::path& path, const ChartSpec& spec, const ChartData& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Error::Kind::Io, "cannot write " + path.string());
  out << render_chart(spec, data);
}

IssueIndex index_from_assignments(const std::vector<IssueAssignment>& assignments) {
  IssueIndex index;
  for (const auto& a : assignments) index[a.comment_id] = a.issue_names();
  return index;
}

std::vector<std::string> sorted_issues(const IssueIndex& index) {
  std::set<std::string> names;
  for (const auto& [id, issues] : index) {
    (void)id;
    names.insert(issues.begin(), issues.end());
  }
  return {names.begin(), names.end()};
}

/// Activity bars (x = issues), one series per period.
ChartJob activity_chart(const std::filesystem::path& dir, const std::string& stem,
                        const std::string& title, const std::vector<ActivityRow>& rows) {
  std::set<std::string> issue_set;
  std::set<std::string> period_set;
  for (const auto& r : rows) {
    issue_set.insert(r.issue);
    period_set.insert(r.period ? r.period->to_string() : "");
  }
  ChartJob job;
  job.path = dir / (stem + ".svg");
  job.spec.kind = ChartKind::Bars;
  job.spec.title = title;
  job.spec.x_label = "issue";
  job.spec.y_label = "words";
  job.spec.x_labels.assign(issue_set.begin(), issue_set.end());

  std::map<std::string, std::size_t> issue_col;
  for (const auto& issue : job.spec.x_labels) issue_col.emplace(issue, issue_col.size());
  std::map<std::string, std::size_t> period_row;
  for (const auto& p : period_set) period_row.emplace(p, period_row.size());

  job.data.series.assign(period_set.size(), Series{});
  for (const auto& [p, row] : period_row) {
    job.data.series[row].label = p.empty() ? "total" : p;
    job.data.series[row].values.assign(job.spec.x_labels.size(), std::nullopt);
  }
  for (const auto& r : rows) {
    std::size_t row = period_row[r.period ? r.period->to_string() : ""];
    job.data.series[row].values[issue_col[r.issue]] = static_cast<double>(r.word_count);
  }
  return job;
}

}  // namespace

std::string file_hash(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Error::Kind::Io, "cannot hash " + path.string());
  char buf[1 << 16];
  std::uint64_t state = 0xcbf29ce484222325ULL;
  while (in) {
    in.read(buf, sizeof buf);
    state = fnv1a_64(std::string_view(buf, static_cast<std::size_t>(in.gcount())), state);
  }
  return hex64(state);
}

RunResult run_pipeline(const PipelineConfig& config) {
  // Startup validation: fail before any work.
  if (config.paths.embeddings.empty()) {
    throw Error(Error::Kind::Config, "config missing paths.embeddings");
  }
  if (config.paths.output_dir.empty()) {
    throw Error(Error::Kind::Config, "config missing paths.output_dir");
  }
  if (config.paths.corpus.empty() && config.paths.notes_dir.empty()) {
    throw Error(Error::Kind::Config, "config needs paths.corpus or paths.notes_dir");
  }
  for (const auto& p :
       {config.paths.notes_dir, config.paths.corpus, config.paths.embeddings,
        config.paths.contextual_vectors, config.paths.issues, config.paths.labels,
        config.paths.stopwords, config.paths.allow_list, config.paths.aliases,
        config.paths.abbreviations, config.paths.note_manifest}) {
    if (!p.empty() && !std::filesystem::exists(p)) {
      throw Error(Error::Kind::Config, "config references missing file " + p.string());
    }
  }
  ReferenceSpec reference = config.reference_spec();  // validates the reference string

  const std::filesystem::path run_dir = config.paths.output_dir;
  std::filesystem::create_directories(run_dir);
  Manifest manifest(config);
  for (const auto& p :
       {config.paths.corpus, config.paths.embeddings, config.paths.contextual_vectors,
        config.paths.issues, config.paths.labels, config.paths.stopwords,
        config.paths.allow_list, config.paths.aliases, config.paths.abbreviations,
        config.paths.note_manifest}) {
    manifest.add_input(p);
  }

  RunResult result;
  result.run_dir = run_dir;
  result.manifest_path = run_dir / "manifest.json";

  std::string stage = "ingest";
  auto fail = [&](const std::exception& e) -> Error {
    manifest.set_stage(stage, "incomplete");
    try {
      manifest.write(result.manifest_path);
    } catch (...) {
      // the original stage error wins
    }
    return Error(Error::Kind::Data, "stage " + stage + ": " + e.what());
  };

  try {
    // ---- ingest ----------------------------------------------------------
    Corpus corpus;
    if (!config.paths.corpus.empty()) {
      corpus = read_corpus(config.paths.corpus);
    } else {
      std::map<std::string, std::string> aliases, abbreviations;
      if (!config.paths.aliases.empty()) aliases = read_alias_map(config.paths.aliases);
      if (!config.paths.abbreviations.empty())
        abbreviations = read_alias_map(config.paths.abbreviations);
      validate_alias_map(aliases);
      std::map<std::string, std::pair<int, int>> overrides;
      if (!config.paths.note_manifest.empty())
        overrides = read_note_manifest(config.paths.note_manifest);

      std::vector<std::filesystem::path> files;
      for (const auto& entry : std::filesystem::directory_iterator(config.paths.notes_dir)) {
        if (entry.is_regular_file()) files.push_back(entry.path());
      }
      std::sort(files.begin(), files.end());
      NoteNaming naming{config.ingest.filename_pattern};
      NoteStyle style = config.note_style();
      corpus.entity_aliases = aliases;
      corpus.abbreviations = abbreviations;
      std::int64_t next_id = 0;
      std::vector<std::string> warnings;
      for (const auto& file : files) {
        manifest.add_input(file);
        RawNote note = load_note_file(file, naming, overrides);
        auto comments = parse_notes(note, aliases, abbreviations, style, next_id, &warnings);
        next_id += static_cast<std::int64_t>(comments.size());
        corpus.comments.insert(corpus.comments.end(), comments.begin(), comments.end());
      }
    }
    const auto corpus_path = run_dir / "corpus.csv";
    write_corpus(corpus, corpus_path);
    manifest.add_output(run_dir, corpus_path);
    manifest.set_stage(stage, "complete");

    // ---- embeddings ------------------------------------------------------
    stage = "embeddings";
    StopwordSet stopwords = config.paths.stopwords.empty()
                                ? StopwordSet::builtin()
                                : StopwordSet::from_file(config.paths.stopwords);
    EmbeddingTable table = load_table(config.paths.embeddings);
    std::unique_ptr<EmbeddingBackend> backend;
    if (!config.paths.contextual_vectors.empty()) {
      backend = std::make_unique<PrecomputedBackend>(
          load_contextual_vectors(config.paths.contextual_vectors), stopwords);
    } else {
      backend = std::make_unique<StaticMeanBackend>(table, stopwords, config.distance.chunk_limit);
    }
    manifest.set_stage(stage, "complete");

    // ---- predefined issues -----------------------------------------------
    stage = "predefined";
    IssueIndex predefined_index;
    bool have_predefined = false;
    if (config.stages.predefined && !config.paths.issues.empty()) {
      auto specs = read_issue_specs(config.paths.issues);
      std::vector<ExpandedQuery> queries;
      queries.reserve(specs.size());
      for (const auto& spec : specs) queries.push_back(expand_query(table, spec, config.query));
      const auto expansion_path = run_dir / "expansion_report.csv";
      write_expansion_report(expansion_path, queries);
      manifest.add_output(run_dir, expansion_path);

      auto assignments = classify_predefined(corpus, queries, stopwords);
      const auto assigned_path = run_dir / "corpus_predefined.csv";
      write_assignments_csv(assigned_path, corpus, assignments, "issues");
      manifest.add_output(run_dir, assigned_path);
      predefined_index = index_from_assignments(assignments);
      have_predefined = true;
      manifest.set_stage(stage, "complete");
    } else {
      manifest.set_stage(stage, "skipped");
    }

    // ---- latent topics ----------------------------------------------------
    stage = "topics";
    IssueIndex latent_index;
    bool have_latent = false;
    if (config.stages.topics) {
      // multiple-party responses are dropped before modelling
      CorpusFilter drop_multi;
      drop_multi.exclude_multi_org = true;
      Corpus single_party = filter_corpus(corpus, drop_multi);
      TfidfOptions tfidf_options{config.nmf.max_features, config.nmf.max_df, std::nullopt};
      if (!config.paths.allow_list.empty()) {
        std::set<std::string> allow;
        std::ifstream in(config.paths.allow_list);
        if (!in) throw Error(Error::Kind::Io, "cannot open allow list");
        std::string token;
        while (in >> token) allow.insert(token);
        tfidf_options.allow_list = std::move(allow);
      }
      TfidfMatrix tfidf = build_tfidf(single_party, stopwords, tfidf_options);
      TopicModel model = fit_nmf(tfidf, config.nmf);

      std::map<int, std::string> labels;
      if (!config.paths.labels.empty()) {
        for (const auto& row : read_csv_file(config.paths.labels)) {
          if (row.size() != 2) throw Error(Error::Kind::Parse, "label file needs 2 columns");
          if (row[0] == "topic_id") continue;
          labels[std::stoi(row[0])] = row[1];
        }
      }
      auto topic_name = [&](int t) {
        auto it = labels.find(t);
        return it != labels.end() ? it->second : "issue " + std::to_string(t);
      };

      const auto keywords_path = run_dir / "topic_keywords.csv";
      write_topic_keywords(keywords_path, model);
      manifest.add_output(run_dir, keywords_path);
      const auto representatives_path = run_dir / "representative_comments.csv";
      write_representative_comments(representatives_path, model,
                                    static_cast<std::size_t>(config.nmf.top_comments));
      manifest.add_output(run_dir, representatives_path);
      const auto trace_path = run_dir / "objective_trace.txt";
      write_objective_trace(trace_path, model);
      manifest.add_output(run_dir, trace_path);

      auto topic_assignments = assign_topics(model, config.nmf.membership_threshold);
      for (const auto& a : topic_assignments) {
        auto& names = latent_index[a.comment_id];
        for (int t : a.topics) names.insert(topic_name(t));
      }
      // latent column over the full corpus; unmodelled rows stay empty
      std::vector<IssueAssignment> latent_rows;
      latent_rows.reserve(corpus.comments.size());
      for (const auto& c : corpus.comments) {
        IssueAssignment row;
        row.comment_id = c.comment_id;
        if (auto it = latent_index.find(c.comment_id); it != latent_index.end()) {
          for (const auto& name : it->second) row.matched_terms[name] = {};
        }
        latent_rows.push_back(std::move(row));
      }
      const auto latent_path = run_dir / "corpus_latent.csv";
      write_assignments_csv(latent_path, corpus, latent_rows, "latent_issues");
      manifest.add_output(run_dir, latent_path);
      have_latent = true;
      manifest.set_stage(stage, "complete");
    } else {
      manifest.set_stage(stage, "skipped");
    }

    // ---- distances & activity ---------------------------------------------
    stage = "distances";
    std::vector<ChartJob> charts;
    if (config.stages.distances && !config.distance.parties.empty() &&
        (have_predefined || have_latent)) {
      DistanceOptions options;
      options.fraction = config.distance.fraction;
      options.n_resamples = config.distance.n_resamples;
      options.seed = config.distance.seed;
      options.weight_by_tokens = config.distance.weight_by_tokens;
      auto periods = period_buckets(corpus, config.distance.period);

      struct IssueSet {
        std::string tag;
        const IssueIndex* index;
      };
      std::vector<IssueSet> sets;
      if (have_predefined) sets.push_back({"predefined", &predefined_index});
      if (have_latent) sets.push_back({"latent", &latent_index});

      for (const auto& set : sets) {
        auto issue_names = sorted_issues(*set.index);
        if (issue_names.empty()) continue;
        DistanceReport report =
            distance_lines(corpus, *set.index, *backend, config.distance.parties, issue_names,
                           periods, reference, options);
        const auto report_path = run_dir / (set.tag + "_distance_report.csv");
        write_distance_report(report_path, report);
        manifest.add_output(run_dir, report_path);

        // line chart per period: x = issues, one line per party
        for (const auto& period : periods) {
          ChartJob job;
          job.path = run_dir / (set.tag + "_distances_" + sanitize_filename(period.to_string()) +
                                ".svg");
          job.spec.kind = ChartKind::Lines;
          job.spec.title = set.tag + " party distances " + period.to_string();
          job.spec.x_label = "issue";
          job.spec.y_label = "similarity to reference";
          job.spec.x_labels = issue_names;
          for (const auto& party : config.distance.parties) {
            Series series;
            series.label = party;
            series.values.assign(issue_names.size(), std::nullopt);
            for (const auto& e : report.entries) {
              if (e.party != party || !(e.period == period)) continue;
              auto col = std::find(issue_names.begin(), issue_names.end(), e.issue);
              if (col != issue_names.end() && e.similarity) {
                series.values[static_cast<std::size_t>(col - issue_names.begin())] =
                    *e.similarity;
              }
            }
            bool any = std::any_of(series.values.begin(), series.values.end(),
                                   [](const auto& v) { return v.has_value(); });
            if (any) job.data.series.push_back(std::move(series));
          }
          if (!job.data.series.empty()) charts.push_back(std::move(job));
        }

        // pairwise heatmaps per (issue, period) where every party has data
        for (const auto& issue : issue_names) {
          for (const auto& period : periods) {
            PairwiseMatrix matrix;
            try {
              matrix = pairwise_matrix(corpus, *set.index, *backend, config.distance.parties,
                                       issue, period, std::nullopt,
                                       config.distance.weight_by_tokens);
            } catch (const Error& e) {
              if (e.kind() == Error::Kind::Data) continue;  // party without data: no matrix
              throw;
            }
            const auto matrix_path =
                run_dir / (set.tag + "_pairwise_" + sanitize_filename(issue) + "_" +
                           sanitize_filename(period.to_string()) + ".csv");
            write_pairwise_matrix(matrix_path, matrix);
            manifest.add_output(run_dir, matrix_path);

            ChartJob job;
            job.path = matrix_path;
            job.path.replace_extension(".svg");
            job.spec.kind = ChartKind::Heatmap;
            job.spec.title = set.tag + " pairwise: " + issue + " " + period.to_string();
            job.spec.x_labels = matrix.parties;
            for (std::size_t r = 0; r < matrix.parties.size(); ++r) {
              Series series;
              series.label = matrix.parties[r];
              for (double v : matrix.sims[r]) series.values.push_back(v);
              job.data.series.push_back(std::move(series));
            }
            job.data.heat_levels = matrix.levels;
            charts.push_back(std::move(job));
          }
        }

        // activity tables
        auto by_issue = activity_counts(corpus, *set.index, ActivityGroupBy::Issue);
        auto by_party = activity_counts(corpus, *set.index, ActivityGroupBy::IssueParty);
        auto by_period =
            activity_counts(corpus, *set.index, ActivityGroupBy::IssuePeriod,
                            config.distance.period);
        const auto activity_path = run_dir / (set.tag + "_activity.csv");
        write_activity_counts(activity_path, by_issue);
        manifest.add_output(run_dir, activity_path);
        const auto activity_party_path = run_dir / (set.tag + "_activity_party.csv");
        write_activity_counts(activity_party_path, by_party);
        manifest.add_output(run_dir, activity_party_path);
        const auto activity_period_path = run_dir / (set.tag + "_activity_period.csv");
        write_activity_counts(activity_period_path, by_period);
        manifest.add_output(run_dir, activity_period_path);

        charts.push_back(activity_chart(run_dir, set.tag + "_words_per_issue",
                                        set.tag + " words per issue", by_period));
      }
      manifest.set_stage(stage, "complete");
    } else {
      manifest.set_stage(stage, "skipped");
    }

    // ---- charts ------------------------------------------------------------
    stage = "charts";
    if (config.stages.charts && !charts.empty()) {
      for (const auto& job : charts) {
        write_svg(job.path, job.spec, job.data);
        manifest.add_output(run_dir, job.path);
      }
      manifest.set_stage(stage, "complete");
    } else {
      manifest.set_stage(stage, "skipped");
    }
  } catch (const Error& e) {
    throw fail(e);
  } catch (const std::exception& e) {
    throw fail(e);
  }

  manifest.write(result.manifest_path);
  result.stages = manifest.stages();
  return result;
}

}  // namespace dialoscope
