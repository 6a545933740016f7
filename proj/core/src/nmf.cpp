#include "dialoscope/nmf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "dialoscope/errors.hpp"
#include "dialoscope/svd.hpp"

namespace dialoscope {

NndsvdResult nndsvd_init(const Eigen::SparseMatrix<double, Eigen::RowMajor>& matrix,
                         int n_topics, std::uint64_t seed) {
  const Eigen::Index m = matrix.rows();
  const Eigen::Index n = matrix.cols();
  if (n_topics < 1) throw Error(Error::Kind::Config, "nndsvd: n_topics must be >= 1");
  if (n_topics > std::min(m, n)) {
    throw Error(Error::Kind::Config, "nndsvd: n_topics exceeds min(rows, cols)");
  }

  TruncatedSvd svd = randomized_svd(matrix, n_topics, seed);

  NndsvdResult result;
  result.w0 = Eigen::MatrixXd::Zero(m, n_topics);
  result.h0 = Eigen::MatrixXd::Zero(n_topics, n);
  result.effective_rank = 0;

  // singular values at roundoff scale are rank deficiency, not factors
  const double rank_floor = svd.S(0) * 1e-12;

  // Leading triplet: for a nonnegative matrix u1/v1 are one-signed; fix the
  // sign and clamp the numerical dust.
  if (svd.S(0) > 0.0) {
    Eigen::VectorXd u = svd.U.col(0);
    Eigen::VectorXd v = svd.V.col(0);
    if (u.sum() < 0.0) {
      u = -u;
      v = -v;
    }
    u = u.cwiseMax(0.0);
    v = v.cwiseMax(0.0);
    double root = std::sqrt(svd.S(0));
    result.w0.col(0) = root * u;
    result.h0.row(0) = root * v.transpose();
    result.effective_rank = 1;
  }

  for (int j = 1; j < n_topics; ++j) {
    if (svd.S(j) <= rank_floor) continue;  // rank deficient: factor stays zero
    Eigen::VectorXd x = svd.U.col(j);
    Eigen::VectorXd y = svd.V.col(j);
    Eigen::VectorXd xp = x.cwiseMax(0.0);
    Eigen::VectorXd xn = (-x).cwiseMax(0.0);
    Eigen::VectorXd yp = y.cwiseMax(0.0);
    Eigen::VectorXd yn = (-y).cwiseMax(0.0);
    double mp = xp.norm() * yp.norm();
    double mn = xn.norm() * yn.norm();
    if (std::max(mp, mn) == 0.0) continue;
    Eigen::VectorXd u, v;
    double sigma;
    if (mp >= mn) {
      u = xp / xp.norm();
      v = yp / yp.norm();
      sigma = mp;
    } else {
      u = xn / xn.norm();
      v = yn / yn.norm();
      sigma = mn;
    }
    double scale = std::sqrt(svd.S(j) * sigma);
    result.w0.col(j) = scale * u;
    result.h0.row(j) = scale * v.transpose();
    ++result.effective_rank;
  }
  return result;
}

double nmf_objective(const Eigen::SparseMatrix<double, Eigen::RowMajor>& x,
                     const Eigen::MatrixXd& w, const Eigen::MatrixXd& h, double alpha,
                     double l1_ratio) {
  // ||X - WH||^2 = ||X||^2 - 2 <X, WH> + tr((W'W)(HH'))
  double x_sq = 0.0;
  double cross = 0.0;
  for (int i = 0; i < x.outerSize(); ++i) {
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(x, i); it; ++it) {
      x_sq += it.value() * it.value();
      cross += it.value() * w.row(it.row()).dot(h.col(it.col()));
    }
  }
  Eigen::MatrixXd wtw = w.transpose() * w;
  Eigen::MatrixXd hht = h * h.transpose();
  double wh_sq = (wtw.array() * hht.array()).sum();
  double fit = 0.5 * (x_sq - 2.0 * cross + wh_sq);

  double l1 = alpha * l1_ratio;
  double l2 = alpha * (1.0 - l1_ratio);
  double reg = l1 * (w.sum() + h.sum()) + 0.5 * l2 * (w.squaredNorm() + h.squaredNorm());
  return fit + reg;
}

namespace {

/// One cyclic HALS pass over the rows of H with W fixed.
void update_h(const Eigen::SparseMatrix<double, Eigen::RowMajor>& x, const Eigen::MatrixXd& w,
              Eigen::MatrixXd& h, double l1, double l2) {
  const int k = static_cast<int>(h.rows());
  Eigen::MatrixXd gram = w.transpose() * w;                    // k x k
  Eigen::MatrixXd p = (x.transpose() * w).transpose();         // k x n
  for (int t = 0; t < k; ++t) {
    double denom = gram(t, t) + l2;
    if (denom <= 0.0) {
      h.row(t).setZero();
      continue;
    }
    Eigen::RowVectorXd numer = h.row(t) * gram(t, t) + p.row(t) - gram.row(t) * h;
    numer.array() -= l1;
    h.row(t) = (numer / denom).cwiseMax(0.0);
  }
}

/// One cyclic HALS pass over the columns of W with H fixed.
void update_w(const Eigen::SparseMatrix<double, Eigen::RowMajor>& x, Eigen::MatrixXd& w,
              const Eigen::MatrixXd& h, double l1, double l2) {
  const int k = static_cast<int>(w.cols());
  Eigen::MatrixXd gram = h * h.transpose();  // k x k
  Eigen::MatrixXd q = x * h.transpose();     // m x k
  for (int j = 0; j < k; ++j) {
    double denom = gram(j, j) + l2;
    if (denom <= 0.0) {
      w.col(j).setZero();
      continue;
    }
    Eigen::VectorXd numer = w.col(j) * gram(j, j) + q.col(j) - w * gram.col(j);
    numer.array() -= l1;
    w.col(j) = (numer / denom).cwiseMax(0.0);
  }
}

}  // namespace

TopicModel fit_nmf(const TfidfMatrix& matrix, const NmfConfig& config) {
  if (config.n_topics < 2) throw Error(Error::Kind::Config, "nmf: n_topics must be >= 2");
  if (config.l1_ratio < 0.0 || config.l1_ratio > 1.0) {
    throw Error(Error::Kind::Config, "nmf: l1_ratio must be in [0,1]");
  }
  if (config.alpha < 0.0) throw Error(Error::Kind::Config, "nmf: alpha must be >= 0");
  if (config.max_iter < 1) throw Error(Error::Kind::Config, "nmf: max_iter must be >= 1");

  const auto& x = matrix.values;
  TopicModel model;
  model.config = config;
  model.terms = matrix.terms;
  model.comment_ids = matrix.comment_ids;

  NndsvdResult init = nndsvd_init(x, config.n_topics, config.seed);
  model.w = std::move(init.w0);
  model.h = std::move(init.h0);

  const double l1 = config.alpha * config.l1_ratio;
  const double l2 = config.alpha * (1.0 - config.l1_ratio);

  double initial = nmf_objective(x, model.w, model.h, config.alpha, config.l1_ratio);
  if (!std::isfinite(initial)) {
    throw Error(Error::Kind::Numeric, "nmf: non-finite objective at initialization");
  }
  model.objective_trace.push_back(initial);
  for (int sweep = 1; sweep <= config.max_iter; ++sweep) {
    Eigen::MatrixXd w_prev = model.w;
    Eigen::MatrixXd h_prev = model.h;

    update_h(x, model.w, model.h, l1, l2);
    update_w(x, model.w, model.h, l1, l2);

    if (!model.w.allFinite() || !model.h.allFinite()) {
      throw Error(Error::Kind::Numeric,
                  "nmf: non-finite factor values at sweep " + std::to_string(sweep));
    }

    double prev = model.objective_trace.back();
    double objective = nmf_objective(x, model.w, model.h, config.alpha, config.l1_ratio);
    if (!std::isfinite(objective)) {
      throw Error(Error::Kind::Numeric,
                  "nmf: non-finite objective at sweep " + std::to_string(sweep));
    }
    if (objective > prev) {
      // Exact coordinate minimization cannot increase the objective; an
      // increase means the numerical floor. Roll the sweep back and stop.
      model.w = std::move(w_prev);
      model.h = std::move(h_prev);
      model.converged = true;
      break;
    }
    model.objective_trace.push_back(objective);
    model.sweeps = sweep;

    double rel = (prev - objective) / std::max(prev, 1e-300);
    if (rel < config.tol) {
      model.converged = true;
      break;
    }
  }

  model.keywords = topic_keywords(model.h, model.terms, config.n_keywords);
  return model;
}

std::vector<TopicAssignment> assign_topics(const TopicModel& model, double membership_threshold) {
  std::vector<TopicAssignment> out;
  const int k = static_cast<int>(model.w.cols());
  out.reserve(model.comment_ids.size());
  for (Eigen::Index i = 0; i < model.w.rows(); ++i) {
    TopicAssignment a;
    a.comment_id = model.comment_ids[static_cast<std::size_t>(i)];
    a.proportions.assign(static_cast<std::size_t>(k), 0.0);
    double sum = model.w.row(i).sum();
    if (sum > 0.0) {
      for (int t = 0; t < k; ++t) {
        double proportion = model.w(i, t) / sum;
        a.proportions[static_cast<std::size_t>(t)] = proportion;
        if (proportion >= membership_threshold) a.topics.push_back(t);
      }
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<std::int64_t> representative_comments(const TopicModel& model, int topic,
                                                  std::size_t top_n) {
  if (topic < 0 || topic >= model.w.cols()) {
    throw Error(Error::Kind::Config, "representative_comments: invalid topic id " +
                                         std::to_string(topic));
  }
  struct Entry {
    double proportion;
    double raw;
    std::int64_t comment_id;
    std::size_t row;
  };
  std::vector<Entry> entries;
  entries.reserve(static_cast<std::size_t>(model.w.rows()));
  for (Eigen::Index i = 0; i < model.w.rows(); ++i) {
    double sum = model.w.row(i).sum();
    double raw = model.w(i, topic);
    double proportion = sum > 0.0 ? raw / sum : 0.0;
    entries.push_back({proportion, raw, model.comment_ids[static_cast<std::size_t>(i)],
                       static_cast<std::size_t>(i)});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.proportion != b.proportion) return a.proportion > b.proportion;
    if (a.raw != b.raw) return a.raw > b.raw;
    return a.comment_id < b.comment_id;
  });
  if (entries.size() > top_n) entries.resize(top_n);
  std::vector<std::int64_t> ids;
  ids.reserve(entries.size());
  for (const auto& e : entries) ids.push_back(e.comment_id);
  return ids;
}

std::vector<std::vector<std::string>> topic_keywords(const Eigen::MatrixXd& h,
                                                     const std::vector<std::string>& terms,
                                                     int k) {
  std::vector<std::vector<std::string>> keywords;
  keywords.reserve(static_cast<std::size_t>(h.rows()));
  std::vector<std::size_t> order(terms.size());
  for (Eigen::Index t = 0; t < h.rows(); ++t) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return h(t, static_cast<Eigen::Index>(a)) > h(t, static_cast<Eigen::Index>(b));
    });
    std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), terms.size());
    std::vector<std::string> topic_terms;
    topic_terms.reserve(take);
    for (std::size_t i = 0; i < take; ++i) topic_terms.push_back(terms[order[i]]);
    keywords.push_back(std::move(topic_terms));
  }
  return keywords;
}

void write_topic_keywords(const std::filesystem::path& path, const TopicModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Error::Kind::Io, "cannot write " + path.string());
  out << "topic_id,rank,keyword,weight\n";
  char buf[32];
  for (std::size_t t = 0; t < model.keywords.size(); ++t) {
    for (std::size_t r = 0; r < model.keywords[t].size(); ++r) {
      const std::string& term = model.keywords[t][r];
      auto it = std::find(model.terms.begin(), model.terms.end(), term);
      double weight = model.h(static_cast<Eigen::Index>(t),
                              static_cast<Eigen::Index>(it - model.terms.begin()));
      std::snprintf(buf, sizeof buf, "%.9g", weight);
      out << t << ',' << (r + 1) << ',' << term << ',' << buf << '\n';
    }
  }
}

void write_representative_comments(const std::filesystem::path& path, const TopicModel& model,
                                   std::size_t top_n) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Error::Kind::Io, "cannot write " + path.string());
  out << "topic_id,rank,comment_id,proportion\n";
  char buf[32];
  auto assignments = assign_topics(model, 0.0);
  std::map<std::int64_t, std::size_t> row_of;
  for (std::size_t i = 0; i < model.comment_ids.size(); ++i) row_of[model.comment_ids[i]] = i;
  for (Eigen::Index t = 0; t < model.w.cols(); ++t) {
    auto ids = representative_comments(model, static_cast<int>(t), top_n);
    for (std::size_t r = 0; r < ids.size(); ++r) {
      double proportion = assignments[row_of[ids[r]]].proportions[static_cast<std::size_t>(t)];
      std::snprintf(buf, sizeof buf, "%.9g", proportion);
      out << t << ',' << (r + 1) << ',' << ids[r] << ',' << buf << '\n';
    }
  }
}

void write_objective_trace(const std::filesystem::path& path, const TopicModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Error::Kind::Io, "cannot write " + path.string());
  char buf[40];
  for (double v : model.objective_trace) {
    std::snprintf(buf, sizeof buf, "%.12g", v);
    out << buf << '\n';
  }
}

}  // namespace dialoscope
