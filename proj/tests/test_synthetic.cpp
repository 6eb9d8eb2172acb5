#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "wordclust/errors.hpp"
#include "wordclust/synthetic.hpp"

using namespace wordclust;

TEST_CASE("default true model") {
  TrueModel tm = default_true_model();
  CHECK(tm.model.k_n() == 4);
  CHECK(tm.model.k_v() == 3);
  CHECK(tm.model.nouns().size() == 12);
  CHECK(tm.model.verbs().size() == 6);
  auto p = tm.distribution();
  double sum = 0;
  for (double x : p) sum += x;
  CHECK(std::abs(sum - 1) <= 1e-12);
  CHECK(tm.model.cluster_prob(0, 0) == doctest::Approx(0.21 / 0.92));
}

TEST_CASE("true model file round trip") {
  TrueModel tm = default_true_model();
  std::ostringstream out;
  write_true_model(out, tm);
  std::istringstream in(out.str());
  TrueModel back = parse_true_model(in);
  auto a = tm.distribution(), b = back.distribution();
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]));
}

TEST_CASE("true model parse errors") {
  auto line_of = [](const std::string& text) {
    std::istringstream in(text);
    try {
      parse_true_model(in);
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  CHECK(line_of("[nouns]\na\n[verbs]\nx\n[probs]\nhalf\n") == 6);
  CHECK(line_of("a\tb\n") == 1);
  CHECK(line_of("[nouns]\na\n[verbs]\nx\ny\n[probs]\n1\n") == 7);
}

TEST_CASE("sample: sizes and degenerate model") {
  TrueModel tm = default_true_model();
  CHECK_THROWS_AS(sample(tm, 0, 1), PreconditionError);
  CoocData one = sample(tm, 1, 1);
  CHECK(one.total() == 1);
  int nonzero = 0;
  for (std::size_t n = 0; n < one.num_nouns(); ++n) nonzero += static_cast<int>(one.row_verbs(n).size());
  CHECK(nonzero == 1);
  CHECK(one.num_nouns() == 12);

  TrueModel point = make_true_model({{"a"}, {"b"}}, {{"x"}, {"y"}}, {0, 1, 0, 0});
  CoocData d = sample(point, 500, 3);
  CHECK(d.count("a", "y") == 500);
}

TEST_CASE("sample: deterministic per seed") {
  TrueModel tm = default_true_model();
  CHECK(sample(tm, 300, 42) == sample(tm, 300, 42));
  CHECK_FALSE(sample(tm, 300, 42) == sample(tm, 300, 43));
}

TEST_CASE("sample: cell frequencies within 3 sigma") {
  TrueModel tm = default_true_model();
  const std::int64_t n = 100000;
  CoocData d = sample(tm, n, 2024);
  auto p = tm.distribution();
  const auto& m = tm.model;
  for (std::size_t i = 0; i < m.nouns().size(); ++i)
    for (std::size_t j = 0; j < m.verbs().size(); ++j) {
      double pij = p[i * m.verbs().size() + j];
      double expected = static_cast<double>(n) * pij;
      double sigma = std::sqrt(static_cast<double>(n) * pij * (1 - pij));
      double got = d.count(m.nouns()[i], m.verbs()[j]);
      CHECK(std::abs(got - expected) <= 3 * sigma);
    }
}

TEST_CASE("kl_divergence") {
  std::vector<double> p{0.5, 0.5}, q{0.25, 0.75};
  CHECK(std::abs(kl_divergence(p, q) - 0.2075) <= 1e-4);
  CHECK(kl_divergence(p, p) == 0);

  std::vector<double> z{1.0, 0.0};
  double tight = kl_divergence(p, z, 1e-12);
  double loose = kl_divergence(p, z, 1e-6);
  CHECK(std::isfinite(tight));
  CHECK(tight > loose);

  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0, 1);
  for (int rep = 0; rep < 200; ++rep) {
    std::size_t k = 2 + rep % 10;
    std::vector<double> a(k), b(k);
    double sa = 0, sb = 0;
    for (std::size_t i = 0; i < k; ++i) {
      a[i] = u(rng) < 0.2 ? 0 : u(rng);
      b[i] = u(rng);
      sa += a[i];
      sb += b[i];
    }
    if (sa == 0) continue;
    for (std::size_t i = 0; i < k; ++i) {
      a[i] /= sa;
      b[i] /= sb;
    }
    CHECK(kl_divergence(a, b) >= -1e-12);
    CHECK(std::abs(kl_divergence(a, a)) <= 1e-12);
  }
}

TEST_CASE("convergence experiment: record layout and determinism") {
  TrueModel tm = default_true_model();
  ExperimentOptions opt;
  opt.sizes = {50, 200};
  opt.trials = 3;
  opt.seed = 5;
  auto recs = run_convergence_experiment(tm, opt);
  CHECK(recs.size() == 2 * 3 * 2);
  CHECK(recs[0].sample_size == 50);
  CHECK(recs[0].criterion == Criterion::MDL);
  CHECK(recs[1].criterion == Criterion::MLE);
  CHECK(recs.back().sample_size == 200);
  CHECK(recs.back().trial == 2);
  for (const auto& r : recs) {
    CHECK(r.num_noun_clusters >= 1);
    CHECK(r.num_noun_clusters <= 12);
    CHECK(r.kl >= 0);
  }

  std::ostringstream a, b, c;
  write_records_csv(a, recs);
  write_records_csv(b, run_convergence_experiment(tm, opt));
  opt.parallel = true;
  write_records_csv(c, run_convergence_experiment(tm, opt));
  CHECK(a.str() == b.str());
  CHECK(a.str() == c.str());
  CHECK(a.str().rfind("sample_size,trial,criterion,num_clusters,kl\n", 0) == 0);

  auto summary = summarize(recs);
  CHECK(summary.size() == 4);
  CHECK(summary[0].trials == 3);
  std::ostringstream s;
  write_summary_csv(s, summary, 1e-12);
  CHECK(s.str().rfind("sample_size,criterion,trials,mean_num_clusters,mean_kl,kl_clamp\n", 0) == 0);
}

TEST_CASE("convergence experiment: MDL KL falls with sample size") {
  ExperimentOptions opt;
  opt.configs = {AnnealConfig{.criterion = Criterion::MDL}};
  auto summary = summarize(run_convergence_experiment(default_true_model(), opt));
  REQUIRE(summary.size() == 7);
  int inversions = 0;
  for (std::size_t i = 1; i < summary.size(); ++i)
    if (summary[i].mean_kl > summary[i - 1].mean_kl) ++inversions;
  CHECK(inversions <= 1);
}
