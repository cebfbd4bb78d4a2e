/* Copyright 2026 The mgtscope Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

// Deliberately naive reference implementations. They share no code with the
// library and favour the most literal reading of each definition over speed.
// Texts fed to them are ASCII: lowercase words, single spaces, sentences
// ending in ". ".

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace oracle {

using Tokens = std::vector<std::string>;

inline Tokens split_words(const std::string& text) {
  Tokens out;
  std::istringstream in(text);
  std::string w;
  while (in >> w) {
    while (!w.empty() && (w.back() == '.' || w.back() == '!' || w.back() == '?')) w.pop_back();
    if (!w.empty()) out.push_back(w);
  }
  return out;
}

inline std::vector<Tokens> split_sentences(const std::string& text) {
  std::vector<Tokens> out;
  std::string current;
  for (char c : text) {
    if (c == '.' || c == '!' || c == '?') {
      Tokens t = split_words(current);
      if (!t.empty()) out.push_back(t);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  Tokens t = split_words(current);
  if (!t.empty()) out.push_back(t);
  return out;
}

// Full (|a|+1) x (|b|+1) Wagner-Fischer table.
inline std::int64_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::vector<std::int64_t>> d(a.size() + 1, std::vector<std::int64_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = static_cast<std::int64_t>(i);
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = static_cast<std::int64_t>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
  }
  return d[a.size()][b.size()];
}

inline std::int64_t lcs(const Tokens& a, const Tokens& b) {
  std::vector<std::vector<std::int64_t>> t(a.size() + 1, std::vector<std::int64_t>(b.size() + 1, 0));
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      t[i][j] = a[i - 1] == b[j - 1] ? t[i - 1][j - 1] + 1 : std::max(t[i - 1][j], t[i][j - 1]);
    }
  }
  return t[a.size()][b.size()];
}

inline std::vector<Tokens> ngrams(const Tokens& t, std::size_t n) {
  std::vector<Tokens> out;
  for (std::size_t i = 0; i + n <= t.size(); ++i) out.emplace_back(t.begin() + i, t.begin() + i + n);
  return out;
}

inline std::map<int, double> ngram_diversity(const Tokens& tokens, int n_max) {
  std::map<int, double> out;
  double acc = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    const auto grams = ngrams(tokens, static_cast<std::size_t>(n));
    const std::set<Tokens> unique(grams.begin(), grams.end());
    acc += static_cast<double>(unique.size()) / static_cast<double>(grams.size());
    out[n] = acc;
  }
  return out;
}

inline std::int64_t occurrences(const Tokens& sentence, const Tokens& gram) {
  std::int64_t c = 0;
  for (const auto& g : ngrams(sentence, gram.size())) c += g == gram ? 1 : 0;
  return c;
}

inline double self_repetition(const std::vector<Tokens>& sentences, int n) {
  double total = 0.0;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const auto grams = ngrams(sentences[i], static_cast<std::size_t>(n));
    const std::set<Tokens> distinct(grams.begin(), grams.end());
    std::int64_t ssum = 0;
    for (const auto& g : distinct) {
      for (std::size_t j = 0; j < sentences.size(); ++j) {
        if (j != i) ssum += occurrences(sentences[j], g);
      }
    }
    total += std::log(1.0 + static_cast<double>(ssum));
  }
  return total / static_cast<double>(sentences.size());
}

inline double bleu(const Tokens& hyp, const Tokens& ref) {
  const std::size_t orders = std::min<std::size_t>(4, hyp.size());
  double log_p = 0.0;
  for (std::size_t n = 1; n <= orders; ++n) {
    std::map<Tokens, std::int64_t> hc, rc;
    for (const auto& g : ngrams(hyp, n)) ++hc[g];
    for (const auto& g : ngrams(ref, n)) ++rc[g];
    std::int64_t clipped = 0;
    std::int64_t total = 0;
    for (const auto& [g, c] : hc) {
      total += c;
      clipped += std::min(c, rc.count(g) ? rc[g] : 0);
    }
    const double num = clipped == 0 ? 1e-9 : static_cast<double>(clipped);
    log_p += std::log(num / static_cast<double>(total));
  }
  const double c = static_cast<double>(hyp.size());
  const double r = static_cast<double>(ref.size());
  const double bp = c > r ? 1.0 : std::exp(1.0 - r / c);
  return bp * std::exp(log_p / static_cast<double>(orders));
}

inline double rouge_l(const Tokens& hyp, const Tokens& ref) {
  const double l = static_cast<double>(lcs(hyp, ref));
  const double p = l / static_cast<double>(hyp.size());
  const double r = l / static_cast<double>(ref.size());
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

inline double cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    dot += a(i) * b(i);
    na += a(i) * a(i);
    nb += b(i) * b(i);
  }
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

// Mean cosine over unordered same-label pairs (i < j).
template <typename Label>
double intra(const Eigen::MatrixXd& rows, const std::vector<Label>& labels) {
  double sum = 0.0;
  double n = 0.0;
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < rows.rows(); ++j) {
      if (labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)]) {
        sum += cosine(rows.row(i).transpose(), rows.row(j).transpose());
        n += 1.0;
      }
    }
  }
  return sum / n;
}

template <typename Label>
double inter(const Eigen::MatrixXd& rows, const std::vector<Label>& labels) {
  double sum = 0.0;
  double n = 0.0;
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < rows.rows(); ++j) {
      if (!(labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)])) {
        sum += cosine(rows.row(i).transpose(), rows.row(j).transpose());
        n += 1.0;
      }
    }
  }
  return sum / n;
}

// Two-pass mean and sample standard deviation.
inline std::pair<double, double> mean_std(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  const double mean = s / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0};
}

// Central differences of f at x with step h.
template <typename F>
Eigen::VectorXd numeric_gradient(F&& f, Eigen::VectorXd x, double h) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double keep = x(i);
    x(i) = keep + h;
    const double up = f(x);
    x(i) = keep - h;
    const double down = f(x);
    x(i) = keep;
    g(i) = (up - down) / (2.0 * h);
  }
  return g;
}

// max_i |a_i - b_i| / max(|a_i|, |b_i|, floor). The floor keeps components
// that are zero in exact arithmetic from dividing round-off by round-off.
inline double max_relative_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                                 double floor = 1e-8) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double scale = std::max({std::abs(a(i)), std::abs(b(i)), floor});
    worst = std::max(worst, std::abs(a(i) - b(i)) / scale);
  }
  return worst;
}

}  // namespace oracle
