#include <cmath>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "wordclust/errors.hpp"
#include "wordclust/model.hpp"

using namespace wordclust;

namespace {

const CoocData& food() {
  static const CoocData d = testsupport::food_data();
  return d;
}

PartitionModel model1() {
  return fit(partition_from_names(food().nouns(), {{"wine", "beer"}, {"bread", "rice"}}),
             singleton_partition(food().num_verbs()), food());
}

PartitionModel model2() {
  return fit(whole_partition(food().num_nouns()), singleton_partition(food().num_verbs()), food());
}

// every set partition of {0..n-1}
void set_partitions(std::size_t n, std::vector<Partition>& out, Partition cur = {}, std::size_t i = 0) {
  if (i == n) {
    out.push_back(cur);
    return;
  }
  for (std::size_t c = 0; c < cur.size(); ++c) {
    cur[c].push_back(i);
    set_partitions(n, out, cur, i + 1);
    cur[c].pop_back();
  }
  cur.push_back({i});
  set_partitions(n, out, cur, i + 1);
}

}  // namespace

TEST_CASE("fit: food data cluster probabilities") {
  PartitionModel m = model1();
  auto wb = m.noun_cluster_of(*food().noun_index("wine"));
  auto br = m.noun_cluster_of(*food().noun_index("bread"));
  auto drink = m.verb_cluster_of(*food().verb_index("drink"));
  CHECK(m.cluster_prob(wb, drink) == doctest::Approx(0.4));
  CHECK(m.cluster_prob(br, drink) == 0.0);

  PartitionModel one = fit(whole_partition(4), whole_partition(3), food());
  CHECK(one.cluster_prob(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("word_prob") {
  PartitionModel m = model1();
  CHECK(word_prob(m, "rice", "make") == doctest::Approx(0.05));
  CHECK(word_prob(m, "wine", "drink") == doctest::Approx(0.2));
  CHECK(word_prob(m, "rice", "drink") == 0.0);
  CHECK_THROWS_AS(word_prob(m, "cake", "eat"), DataError);
}

TEST_CASE("model_dl and param_dl") {
  CHECK(model_dl(4) == 3);
  CHECK(model_dl(1) == 0);
  CHECK(model_dl(21) == 20);
  CHECK(std::abs(param_dl(2, 3, 20) - 10.80) <= 0.01);
  CHECK(std::abs(param_dl(1, 3, 20) - 4.32) <= 0.01);
  CHECK(param_dl(1, 1, 20) == 0);
  CHECK(param_dl(1, 1, 12345) == 0);
}

TEST_CASE("data_dl and total_dl: food data models") {
  CHECK(std::abs(data_dl(model1(), food()) - 54.44) <= 0.01);
  CHECK(std::abs(data_dl(model2(), food()) - 70.44) <= 0.01);

  auto d1 = total_dl(model1(), food());
  auto d2 = total_dl(model2(), food());
  CHECK(std::abs(d1.l_prime - 65.24) <= 0.01);
  CHECK(std::abs(d2.l_prime - 74.76) <= 0.01);
  CHECK(d1.l_prime < d2.l_prime);
  CHECK(d1.l_mod == 3);
  CHECK(d1.l_total == doctest::Approx(d1.l_mod + d1.l_prime));

  // term by term
  double m1 = -8 * std::log2(0.2) - 8 * std::log2(0.2) - 2 * std::log2(0.05) - 2 * std::log2(0.05);
  double m2 = -8 * std::log2(0.1) - 8 * std::log2(0.1) - 4 * std::log2(0.05);
  CHECK(data_dl(model1(), food()) == doctest::Approx(m1));
  CHECK(data_dl(model2(), food()) == doctest::Approx(m2));
}

TEST_CASE("data_dl: all-zero data is 0") {
  CoocData::Builder b;
  b.add_noun("a");
  b.add_noun("b");
  b.add_verb("x");
  CoocData empty = std::move(b).build();
  PartitionModel m({"a", "b"}, {"x"}, whole_partition(2), whole_partition(1), {1.0});
  CHECK(data_dl(m, empty) == 0);
}

TEST_CASE("criterion_value") {
  CHECK(std::abs(criterion_value(model1(), food(), Criterion::MLE) - 54.44) <= 0.01);
  CHECK(std::abs(criterion_value(model1(), food(), Criterion::MDL) - 65.24) <= 0.01);
  PartitionModel one = fit(whole_partition(4), whole_partition(3), food());
  CHECK(criterion_value(one, food(), Criterion::MDL) == criterion_value(one, food(), Criterion::MLE));
  CHECK(parse_criterion("mle") == Criterion::MLE);
  CHECK(criterion_name(Criterion::MDL) == "mdl");
  CHECK_THROWS_AS(parse_criterion("aic"), ConfigError);
}

TEST_CASE("data_dl agrees with the direct oracle on random partitions") {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 40; ++rep) {
    CoocData d = testsupport::random_table(rng, 5, 3, 7);
    std::vector<Partition> all;
    set_partitions(5, all);
    const auto& p = all[rng() % all.size()];
    PartitionModel m = fit(p, singleton_partition(3), d);
    auto dense = testsupport::dense(d);
    CHECK(data_dl(m, d) == doctest::Approx(testsupport::partition_criterion(dense, p, false)));
    CHECK(criterion_value(m, d, Criterion::MDL) ==
          doctest::Approx(testsupport::partition_criterion(dense, p, true)));
  }
}

TEST_CASE("property: normalization, smoothing and finiteness") {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 40; ++rep) {
    CoocData d = testsupport::random_table(rng, 6, 4, 9, 0.4);
    std::vector<Partition> all;
    set_partitions(6, all);
    const auto& p = all[rng() % all.size()];
    Partition vp = rep % 2 ? singleton_partition(4) : Partition{{0, 1}, {2, 3}};
    PartitionModel m = fit(p, vp, d);
    double sum = 0;
    for (std::size_t n = 0; n < 6; ++n)
      for (std::size_t v = 0; v < 4; ++v) {
        double w = word_prob(m, n, v);
        sum += w;
        if (d.count(n, v) == 0 && m.cluster_prob(m.noun_cluster_of(n), m.verb_cluster_of(v)) > 0) CHECK(w > 0);
      }
    CHECK(std::abs(sum - 1) <= 1e-9);
    CHECK(std::isfinite(data_dl(m, d)));
  }
}

TEST_CASE("property: splitting a noun cluster never increases l_dat") {
  std::mt19937_64 rng(9);
  for (int rep = 0; rep < 60; ++rep) {
    CoocData d = testsupport::random_table(rng, 6, 3, 8);
    std::vector<Partition> all;
    set_partitions(6, all);
    Partition coarse = all[rng() % all.size()];
    // split the largest cluster at a random point
    auto it = std::max_element(coarse.begin(), coarse.end(), [](auto& a, auto& b) { return a.size() < b.size(); });
    if (it->size() < 2) continue;
    Partition fine = coarse;
    auto& big = fine[static_cast<std::size_t>(it - coarse.begin())];
    std::size_t cut = 1 + rng() % (big.size() - 1);
    std::vector<std::size_t> tail(big.begin() + static_cast<std::ptrdiff_t>(cut), big.end());
    big.resize(cut);
    fine.push_back(tail);
    double lc = data_dl(fit(coarse, singleton_partition(3), d), d);
    double lf = data_dl(fit(fine, singleton_partition(3), d), d);
    CHECK(lf <= lc + 1e-9);
  }
}

TEST_CASE("property: MDL and MLE disagree on the food data") {
  // exhaustive over all 15 noun partitions
  std::vector<Partition> all;
  set_partitions(4, all);
  auto singletons = singleton_partition(4);
  auto m1 = partition_from_names(food().nouns(), {{"wine", "beer"}, {"bread", "rice"}});
  auto value = [&](const Partition& p, Criterion c) {
    return criterion_value(fit(p, singleton_partition(3), food()), food(), c);
  };
  double best_mle = 1e300, best_mdl = 1e300;
  Partition arg_mdl;
  for (const auto& p : all) {
    best_mle = std::min(best_mle, value(p, Criterion::MLE));
    if (value(p, Criterion::MDL) < best_mdl) {
      best_mdl = value(p, Criterion::MDL);
      arg_mdl = p;
    }
  }
  CHECK(value(singletons, Criterion::MLE) <= value(m1, Criterion::MLE));
  CHECK(value(singletons, Criterion::MLE) == doctest::Approx(best_mle));
  CHECK(value(m1, Criterion::MDL) < value(singletons, Criterion::MDL));
  CHECK(value(m1, Criterion::MDL) == doctest::Approx(best_mdl));
}

TEST_CASE("PartitionModel validation") {
  CHECK_THROWS_AS(PartitionModel({"a", "b"}, {"x"}, Partition{{0}}, whole_partition(1), {1.0}), DataError);
  CHECK_THROWS_AS(PartitionModel({"a", "b"}, {"x"}, Partition{{0, 1}, {1}}, whole_partition(1), {0.5, 0.5}),
                  DataError);
  CHECK_THROWS_AS(PartitionModel({"a"}, {"x"}, whole_partition(1), whole_partition(1), {-1.0}), DataError);
}
