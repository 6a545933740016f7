// dialoscope: dialogue-corpus analysis toolkit.
//
// Subcommands: ingest, expand, classify, topics, distances, activity,
// diagnose, report, run. Exit codes: 0 success, 1 usage error, 2 data error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "dialoscope/config.hpp"
#include "dialoscope/csv.hpp"
#include "dialoscope/diagnostics.hpp"
#include "dialoscope/pipeline.hpp"
#include "dialoscope/svg.hpp"

namespace fs = std::filesystem;
using namespace dialoscope;

namespace {

StopwordSet load_stopwords(const std::string& path) {
  return path.empty() ? StopwordSet::builtin() : StopwordSet::from_file(path);
}

std::unique_ptr<EmbeddingBackend> make_backend(const EmbeddingTable& table,
                                               const StopwordSet& stopwords,
                                               const std::string& contextual_path,
                                               std::size_t chunk_limit) {
  if (!contextual_path.empty()) {
    return std::make_unique<PrecomputedBackend>(load_contextual_vectors(contextual_path),
                                                stopwords);
  }
  return std::make_unique<StaticMeanBackend>(table, stopwords, chunk_limit);
}

std::vector<std::string> read_token_file(const fs::path& path, const StopwordSet& stopwords) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Error::Kind::Io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return tokenize(clean_text(buf.str()), stopwords);
}

int run_ingest(const std::string& notes_dir, const std::string& out,
               const std::string& aliases_path, const std::string& abbrev_path,
               const std::string& manifest_path, const std::string& pattern, bool strict) {
  std::map<std::string, std::string> aliases, abbreviations;
  if (!aliases_path.empty()) aliases = read_alias_map(aliases_path);
  if (!abbrev_path.empty()) abbreviations = read_alias_map(abbrev_path);
  validate_alias_map(aliases);
  std::map<std::string, std::pair<int, int>> overrides;
  if (!manifest_path.empty()) overrides = read_note_manifest(manifest_path);

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(notes_dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Error(Error::Kind::Data, "no note files in " + notes_dir);

  NoteStyle style;
  style.strict = strict;
  NoteNaming naming;
  if (!pattern.empty()) naming.pattern = pattern;

  Corpus corpus;
  corpus.entity_aliases = aliases;
  corpus.abbreviations = abbreviations;
  std::int64_t next_id = 0;
  std::vector<std::string> warnings;
  for (const auto& file : files) {
    RawNote note = load_note_file(file, naming, overrides);
    auto comments = parse_notes(note, aliases, abbreviations, style, next_id, &warnings);
    next_id += static_cast<std::int64_t>(comments.size());
    corpus.comments.insert(corpus.comments.end(), comments.begin(), comments.end());
  }
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  write_corpus(corpus, out);
  std::cout << "wrote " << corpus.comments.size() << " comments from " << files.size()
            << " notes to " << out << '\n';
  return 0;
}

int run_diagnose(const std::string& embeddings, const std::string& corpus_a,
                 const std::string& corpus_b, const std::string& out_dir,
                 const std::string& stopword_path, std::size_t max_n) {
  fs::create_directories(out_dir);
  StopwordSet stopwords = load_stopwords(stopword_path);
  EmbeddingTable table = load_table(embeddings);

  auto profile = anisotropy_profile(table);
  write_anisotropy_profile(fs::path(out_dir) / "anisotropy.csv", profile);

  auto points = default_sample_points(max_n);
  std::vector<std::string> tokens_a, tokens_b;
  if (!corpus_a.empty()) {
    tokens_a = read_token_file(corpus_a, stopwords);
    auto trace = prefix_trace(table, tokens_a, points);
    write_prefix_trace(fs::path(out_dir) / "prefix_trace_a.csv", trace);
    if (trace.tokens_skipped) {
      std::cerr << "corpus A: skipped " << trace.tokens_skipped << " out-of-vocabulary tokens\n";
    }
  }
  if (!corpus_b.empty()) {
    tokens_b = read_token_file(corpus_b, stopwords);
    auto trace = prefix_trace(table, tokens_b, points);
    write_prefix_trace(fs::path(out_dir) / "prefix_trace_b.csv", trace);
    if (trace.tokens_skipped) {
      std::cerr << "corpus B: skipped " << trace.tokens_skipped << " out-of-vocabulary tokens\n";
    }
  }
  if (!corpus_a.empty() && !corpus_b.empty()) {
    auto convergence = cross_corpus_convergence(table, tokens_a, tokens_b, points);
    write_convergence(fs::path(out_dir) / "convergence.csv", convergence);
  }
  std::cout << "diagnostics written to " << out_dir << '\n';
  return 0;
}

/// Charts from existing report CSVs, so plots always trace back to report rows.
int run_report(const std::string& kind, const std::string& in, const std::string& out,
               const std::string& title, const std::string& period) {
  auto rows = read_csv_file(in);
  if (rows.size() < 2) throw Error(Error::Kind::Data, "report " + in + " has no data rows");
  const auto& header = rows.front();
  auto col = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw Error(Error::Kind::Data, in + ": missing column " + name);
    }
    return static_cast<std::size_t>(it - header.begin());
  };

  ChartSpec spec;
  ChartData data;
  spec.title = title.empty() ? fs::path(in).stem().string() : title;

  if (kind == "bars") {
    spec.kind = ChartKind::Bars;
    std::size_t issue_idx = col("issue"), words_idx = col("word_count");
    spec.x_label = "issue";
    spec.y_label = "words";
    Series series;
    series.label = "words";
    for (std::size_t r = 1; r < rows.size(); ++r) {
      spec.x_labels.push_back(rows[r][issue_idx]);
      series.values.push_back(std::stod(rows[r][words_idx]));
    }
    data.series.push_back(std::move(series));
  } else if (kind == "lines") {
    spec.kind = ChartKind::Lines;
    std::size_t party_idx = col("party"), issue_idx = col("issue"), period_idx = col("period"),
                sim_idx = col("similarity");
    spec.x_label = "issue";
    spec.y_label = "similarity to reference";
    std::map<std::string, std::map<std::string, std::optional<double>>> by_party;
    std::set<std::string> issues;
    for (std::size_t r = 1; r < rows.size(); ++r) {
      if (!period.empty() && rows[r][period_idx] != period) continue;
      issues.insert(rows[r][issue_idx]);
      auto& cell = by_party[rows[r][party_idx]][rows[r][issue_idx]];
      if (!rows[r][sim_idx].empty()) cell = std::stod(rows[r][sim_idx]);
    }
    spec.x_labels.assign(issues.begin(), issues.end());
    for (auto& [party, values] : by_party) {
      Series series;
      series.label = party;
      for (const auto& issue : spec.x_labels) {
        auto it = values.find(issue);
        series.values.push_back(it == values.end() ? std::nullopt : it->second);
      }
      data.series.push_back(std::move(series));
    }
  } else if (kind == "heatmap") {
    spec.kind = ChartKind::Heatmap;
    // pairwise CSV: header `party,<p1>,...`, sims rows, trailing bounds row
    if (header.empty() || header[0] != "party") {
      throw Error(Error::Kind::Data, in + ": not a pairwise matrix file");
    }
    spec.x_labels.assign(header.begin() + 1, header.end());
    std::array<double, 3> bounds{};
    std::vector<std::vector<double>> sims;
    for (std::size_t r = 1; r < rows.size(); ++r) {
      if (rows[r][0] == "bounds") {
        for (std::size_t i = 0; i < 3 && i + 1 < rows[r].size(); ++i) {
          bounds[i] = std::stod(rows[r][i + 1]);
        }
        continue;
      }
      Series series;
      series.label = rows[r][0];
      std::vector<double> row_sims;
      for (std::size_t i = 1; i < rows[r].size(); ++i) {
        double v = std::stod(rows[r][i]);
        series.values.push_back(v);
        row_sims.push_back(v);
      }
      sims.push_back(std::move(row_sims));
      data.series.push_back(std::move(series));
    }
    for (const auto& row_sims : sims) {
      std::vector<int> levels;
      for (double s : row_sims) {
        int level = 3;
        if (s >= bounds[0]) level = 0;
        else if (s >= bounds[1]) level = 1;
        else if (s >= bounds[2]) level = 2;
        levels.push_back(level);
      }
      data.heat_levels.push_back(std::move(levels));
    }
  } else {
    throw Error(Error::Kind::Config, "report kind must be bars, lines, or heatmap");
  }

  std::ofstream svg(out, std::ios::binary);
  if (!svg) throw Error(Error::Kind::Io, "cannot write " + out);
  svg << render_chart(spec, data);
  std::cout << "wrote " << out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dialoscope: dialogue-corpus analysis toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;

  // ---- run ---------------------------------------------------------------
  auto* run = app.add_subcommand("run", "run the full pipeline from a config file");
  run->add_option("--config", config_path, "pipeline config file")->required();
  run->add_option("--set", overrides, "override config keys, e.g. --set nmf.n_topics=8");

  // ---- ingest ------------------------------------------------------------
  auto* ingest = app.add_subcommand("ingest", "parse session notes into the corpus CSV");
  std::string notes_dir, out, aliases_path, abbrev_path, note_manifest, pattern;
  bool strict = false;
  ingest->add_option("--notes", notes_dir, "directory of note files")->required();
  ingest->add_option("--out", out, "output corpus CSV")->required();
  ingest->add_option("--aliases", aliases_path, "variant,canonical CSV");
  ingest->add_option("--abbreviations", abbrev_path, "abbreviation,expansion CSV");
  ingest->add_option("--note-manifest", note_manifest, "file,year,month overrides CSV");
  ingest->add_option("--pattern", pattern, "year/month filename regex");
  ingest->add_flag("--strict", strict, "fail on unparseable lines");

  // ---- expand ------------------------------------------------------------
  auto* expand = app.add_subcommand("expand", "query expansion report for an issue file");
  std::string embeddings, issues_path;
  ExpandOptions expand_options;
  expand->add_option("--embeddings", embeddings, "static word-vector file")->required();
  expand->add_option("--issues", issues_path, "issue_name,seed_keywords CSV")->required();
  expand->add_option("--out", out, "expansion report CSV")->required();
  expand->add_option("--base-sim", expand_options.base_sim, "starting cosine threshold");
  expand->add_option("--max-sim", expand_options.max_sim, "threshold ceiling");
  expand->add_option("--overflow", expand_options.overflow_count, "neighbor count trigger");
  expand->add_option("--step", expand_options.step, "threshold raise step");

  // ---- classify ----------------------------------------------------------
  auto* classify = app.add_subcommand("classify", "tag comments with predefined issues");
  std::string corpus_path, stopword_path, trigger_out, expansion_out;
  classify->add_option("--corpus", corpus_path, "corpus CSV")->required();
  classify->add_option("--embeddings", embeddings, "static word-vector file")->required();
  classify->add_option("--issues", issues_path, "issue file")->required();
  classify->add_option("--out", out, "augmented corpus CSV")->required();
  classify->add_option("--expansion-report", expansion_out, "also write the expansion CSV");
  classify->add_option("--per-term", trigger_out, "per-seed trigger report CSV");
  classify->add_option("--stopwords", stopword_path, "stopword file (one token per line)");
  classify->add_option("--base-sim", expand_options.base_sim, "starting cosine threshold");
  classify->add_option("--max-sim", expand_options.max_sim, "threshold ceiling");
  classify->add_option("--overflow", expand_options.overflow_count, "neighbor count trigger");
  classify->add_option("--step", expand_options.step, "threshold raise step");

  // ---- topics ------------------------------------------------------------
  auto* topics = app.add_subcommand("topics", "latent issue extraction (NMF)");
  std::string out_dir, allow_list, labels_path, engine = "nmf";
  NmfConfig nmf;
  bool keep_multi = false;
  topics->add_option("--corpus", corpus_path, "corpus CSV")->required();
  topics->add_option("--out-dir", out_dir, "output directory")->required();
  topics->add_option("--engine", engine, "topic engine (only nmf)");
  topics->add_option("--n-topics", nmf.n_topics, "number of topics");
  topics->add_option("--alpha", nmf.alpha, "regularization strength");
  topics->add_option("--l1-ratio", nmf.l1_ratio, "L1/L2 mixing ratio");
  topics->add_option("--tol", nmf.tol, "relative objective decrease stop");
  topics->add_option("--max-iter", nmf.max_iter, "sweep cap");
  topics->add_option("--max-features", nmf.max_features, "vocabulary size cap");
  topics->add_option("--max-df", nmf.max_df, "document-frequency cap");
  topics->add_option("--membership-threshold", nmf.membership_threshold, "topic membership cut");
  topics->add_option("--seed", nmf.seed, "initialization seed");
  topics->add_option("--keywords", nmf.n_keywords, "keywords per topic");
  topics->add_option("--top-comments", nmf.top_comments, "representative comments per topic");
  topics->add_option("--stopwords", stopword_path, "stopword file");
  topics->add_option("--allow-list", allow_list, "token allow-list file");
  topics->add_option("--labels", labels_path, "topic_id,label CSV");
  topics->add_flag("--keep-multi-org", keep_multi, "keep multi-party responses");

  // ---- distances ---------------------------------------------------------
  auto* distances = app.add_subcommand("distances", "party distance report");
  std::string assignments_path, column = "issues", contextual, reference = "average";
  std::string pairwise_dir, period_str = "year";
  std::vector<std::string> parties;
  DistanceOptions distance_options;
  std::size_t chunk_limit = 512;
  distances->add_option("--corpus", corpus_path, "corpus CSV")->required();
  distances->add_option("--embeddings", embeddings, "static word-vector file")->required();
  distances->add_option("--assignments", assignments_path, "augmented corpus CSV")->required();
  distances->add_option("--column", column, "issue column name (issues | latent_issues)");
  distances->add_option("--parties", parties, "party list")->required()->delimiter(',');
  distances->add_option("--out", out, "distance report CSV")->required();
  distances->add_option("--reference", reference, "average or baseline:<party>");
  distances->add_option("--period", period_str, "year or year-month");
  distances->add_option("--contextual", contextual, "precomputed per-comment vectors CSV");
  distances->add_option("--pairwise-dir", pairwise_dir, "also write pairwise matrices here");
  distances->add_option("--fraction", distance_options.fraction, "perturbation fraction");
  distances->add_option("--resamples", distance_options.n_resamples, "uncertainty resamples");
  distances->add_option("--seed", distance_options.seed, "resampling seed");
  distances->add_option("--chunk-limit", chunk_limit, "token chunk limit");
  distances->add_option("--stopwords", stopword_path, "stopword file");

  // ---- activity ----------------------------------------------------------
  auto* activity = app.add_subcommand("activity", "words-per-issue activity counts");
  std::string group_by = "issue";
  activity->add_option("--corpus", corpus_path, "corpus CSV")->required();
  activity->add_option("--assignments", assignments_path, "augmented corpus CSV")->required();
  activity->add_option("--column", column, "issue column name");
  activity->add_option("--out", out, "activity CSV")->required();
  activity->add_option("--group-by", group_by, "issue | issue-party | issue-period");
  activity->add_option("--period", period_str, "year or year-month");

  // ---- diagnose ----------------------------------------------------------
  auto* diagnose = app.add_subcommand("diagnose", "embedding-space structure diagnostics");
  std::string corpus_a, corpus_b;
  std::size_t max_n = 5000;
  diagnose->add_option("--embeddings", embeddings, "static word-vector file")->required();
  diagnose->add_option("--out-dir", out_dir, "output directory")->required();
  diagnose->add_option("--corpus-a", corpus_a, "first demo text file");
  diagnose->add_option("--corpus-b", corpus_b, "second demo text file");
  diagnose->add_option("--stopwords", stopword_path, "stopword file");
  diagnose->add_option("--max-n", max_n, "largest prefix length");

  // ---- report ------------------------------------------------------------
  auto* report = app.add_subcommand("report", "render an SVG chart from a report CSV");
  std::string kind, title;
  report->add_option("--kind", kind, "bars | lines | heatmap")->required();
  report->add_option("--in", corpus_path, "report CSV")->required();
  report->add_option("--out", out, "output SVG")->required();
  report->add_option("--title", title, "chart title");
  report->add_option("--period", period_str, "period filter for line charts")->expected(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage errors are exit code 1
  }

  try {
    if (*run) {
      PipelineConfig config = load_config(config_path);
      for (const auto& kv : overrides) {
        std::size_t eq = kv.find('=');
        if (eq == std::string::npos) {
          throw Error(Error::Kind::Config, "--set expects section.key=value, got '" + kv + "'");
        }
        apply_override(config, kv.substr(0, eq), kv.substr(eq + 1));
      }
      RunResult res = run_pipeline(config);
      for (const auto& s : res.stages) std::cout << s.name << ": " << s.status << '\n';
      std::cout << "run directory: " << res.run_dir.string() << '\n';
    } else if (*ingest) {
      return run_ingest(notes_dir, out, aliases_path, abbrev_path, note_manifest, pattern,
                        strict);
    } else if (*expand) {
      EmbeddingTable table = load_table(embeddings);
      std::vector<ExpandedQuery> queries;
      for (const auto& spec : read_issue_specs(issues_path)) {
        queries.push_back(expand_query(table, spec, expand_options));
        for (const auto& seed : queries.back().skipped_seeds) {
          std::cerr << "warning: seed '" << seed << "' not representable, skipped\n";
        }
      }
      write_expansion_report(out, queries);
      std::cout << "wrote " << out << '\n';
    } else if (*classify) {
      Corpus corpus = read_corpus(corpus_path);
      StopwordSet stopwords = load_stopwords(stopword_path);
      EmbeddingTable table = load_table(embeddings);
      std::vector<ExpandedQuery> queries;
      for (const auto& spec : read_issue_specs(issues_path)) {
        queries.push_back(expand_query(table, spec, expand_options));
      }
      if (!expansion_out.empty()) write_expansion_report(expansion_out, queries);
      QueryMode mode = trigger_out.empty() ? QueryMode::Combined : QueryMode::PerTerm;
      auto result = run_classifier(corpus, queries, combine_modes(queries, mode), stopwords);
      write_assignments_csv(out, corpus, result.assignments, "issues");
      if (!trigger_out.empty()) {
        std::ofstream triggers(trigger_out, std::ios::binary);
        if (!triggers) throw Error(Error::Kind::Io, "cannot write " + trigger_out);
        triggers << "comment_id,issue,seed,matched_term\n";
        for (const auto& t : result.triggers) {
          triggers << t.comment_id << ',' << csv_escape(t.issue) << ',' << csv_escape(t.seed)
                   << ',' << csv_escape(t.matched_term) << '\n';
        }
      }
      std::cout << "wrote " << out << '\n';
    } else if (*topics) {
      if (engine != "nmf") {
        throw Error(Error::Kind::Config, "unsupported engine '" + engine + "' (only nmf)");
      }
      fs::create_directories(out_dir);
      Corpus corpus = read_corpus(corpus_path);
      if (!keep_multi) {
        CorpusFilter drop_multi;
        drop_multi.exclude_multi_org = true;
        corpus = filter_corpus(corpus, drop_multi);
      }
      StopwordSet stopwords = load_stopwords(stopword_path);
      TfidfOptions tfidf_options{nmf.max_features, nmf.max_df, std::nullopt};
      if (!allow_list.empty()) {
        std::set<std::string> allow;
        std::ifstream in(allow_list);
        if (!in) throw Error(Error::Kind::Io, "cannot open allow list " + allow_list);
        std::string token;
        while (in >> token) allow.insert(token);
        tfidf_options.allow_list = std::move(allow);
      }
      TfidfMatrix tfidf = build_tfidf(corpus, stopwords, tfidf_options);
      TopicModel model = fit_nmf(tfidf, nmf);
      write_topic_keywords(fs::path(out_dir) / "topic_keywords.csv", model);
      write_representative_comments(fs::path(out_dir) / "representative_comments.csv", model,
                                    static_cast<std::size_t>(nmf.top_comments));
      write_objective_trace(fs::path(out_dir) / "objective_trace.txt", model);

      std::map<int, std::string> labels;
      if (!labels_path.empty()) {
        for (const auto& row : read_csv_file(labels_path)) {
          if (row.size() == 2 && row[0] != "topic_id") labels[std::stoi(row[0])] = row[1];
        }
      }
      auto assignments = assign_topics(model, nmf.membership_threshold);
      std::vector<IssueAssignment> rows;
      rows.reserve(assignments.size());
      for (const auto& a : assignments) {
        IssueAssignment row;
        row.comment_id = a.comment_id;
        for (int t : a.topics) {
          auto it = labels.find(t);
          row.matched_terms[it != labels.end() ? it->second : "issue " + std::to_string(t)] = {};
        }
        rows.push_back(std::move(row));
      }
      write_assignments_csv(fs::path(out_dir) / "corpus_latent.csv", corpus, rows,
                            "latent_issues");
      std::cout << "topic artifacts in " << out_dir << " (" << model.sweeps << " sweeps, "
                << (model.converged ? "converged" : "sweep cap") << ")\n";
    } else if (*distances) {
      Corpus corpus = read_corpus(corpus_path);
      StopwordSet stopwords = load_stopwords(stopword_path);
      EmbeddingTable table = load_table(embeddings);
      auto backend = make_backend(table, stopwords, contextual, chunk_limit);
      IssueIndex index = read_issue_column(assignments_path, column);

      PeriodGranularity granularity =
          period_str == "year-month" ? PeriodGranularity::YearMonth : PeriodGranularity::Year;
      auto periods = period_buckets(corpus, granularity);
      ReferenceSpec ref;
      if (reference.rfind("baseline:", 0) == 0) {
        ref.kind = ReferencePosition::Kind::Baseline;
        ref.baseline_party = reference.substr(9);
      } else if (reference != "average") {
        throw Error(Error::Kind::Config, "--reference must be average or baseline:<party>");
      }
      std::set<std::string> issue_set;
      for (const auto& [id, names] : index) {
        (void)id;
        issue_set.insert(names.begin(), names.end());
      }
      std::vector<std::string> issue_names(issue_set.begin(), issue_set.end());
      DistanceReport rep = distance_lines(corpus, index, *backend, parties, issue_names, periods,
                                          ref, distance_options);
      write_distance_report(out, rep);
      if (!pairwise_dir.empty()) {
        fs::create_directories(pairwise_dir);
        for (const auto& issue : issue_names) {
          for (const auto& period : periods) {
            try {
              auto matrix = pairwise_matrix(corpus, index, *backend, parties, issue, period,
                                            std::nullopt, distance_options.weight_by_tokens);
              std::string stem = issue + "_" + period.to_string();
              for (char& c : stem) {
                if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
              }
              write_pairwise_matrix(fs::path(pairwise_dir) / (stem + ".csv"), matrix);
            } catch (const Error& e) {
              if (e.kind() != Error::Kind::Data) throw;
            }
          }
        }
      }
      std::cout << "wrote " << out << '\n';
    } else if (*activity) {
      Corpus corpus = read_corpus(corpus_path);
      IssueIndex index = read_issue_column(assignments_path, column);
      ActivityGroupBy group = ActivityGroupBy::Issue;
      if (group_by == "issue-party") group = ActivityGroupBy::IssueParty;
      else if (group_by == "issue-period") group = ActivityGroupBy::IssuePeriod;
      else if (group_by != "issue") {
        throw Error(Error::Kind::Config, "--group-by must be issue, issue-party, issue-period");
      }
      PeriodGranularity granularity =
          period_str == "year-month" ? PeriodGranularity::YearMonth : PeriodGranularity::Year;
      write_activity_counts(out, activity_counts(corpus, index, group, granularity));
      std::cout << "wrote " << out << '\n';
    } else if (*diagnose) {
      return run_diagnose(embeddings, corpus_a, corpus_b, out_dir, stopword_path, max_n);
    } else if (*report) {
      return run_report(kind, corpus_path, out, title,
                        report->count("--period") ? period_str : "");
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == Error::Kind::Config ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
