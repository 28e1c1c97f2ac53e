#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "adfcm/error.hpp"
#include "adfcm/feature_select.hpp"
#include "adfcm/ingest.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace adfcm;

namespace {

// Contingency-table oracle over raw codes.
struct Table {
  std::map<std::size_t, std::map<std::string, double>> joint;
  std::map<std::size_t, double> a;
  std::map<std::string, double> c;
  double n = 0;

  Table(const std::vector<std::size_t>& codes, const std::vector<std::string>& labels) {
    for (std::size_t k = 0; k < codes.size(); ++k) {
      joint[codes[k]][labels[k]] += 1;
      a[codes[k]] += 1;
      c[labels[k]] += 1;
      n += 1;
    }
  }

  double h_a() const {
    double h = 0;
    for (const auto& [_, cnt] : a) h -= cnt / n * std::log2(cnt / n);
    return h;
  }
  double h_c() const {
    double h = 0;
    for (const auto& [_, cnt] : c) h -= cnt / n * std::log2(cnt / n);
    return h;
  }
  double h_a_given_c() const {
    double h = 0;
    for (const auto& [code, row] : joint) {
      for (const auto& [cls, cnt] : row) h -= cnt / n * std::log2(cnt / c.at(cls));
    }
    return h;
  }
  double su() const {
    const double denom = h_a() + h_c();
    return denom == 0 ? 0.0 : 2 * (h_a() - h_a_given_c()) / denom;
  }
  double class_ru(const std::string& cls, std::size_t feature_bins) const {
    const double nc = c.at(cls);
    double h = 0;
    for (const auto& [code, row] : joint) {
      auto it = row.find(cls);
      if (it != row.end()) h -= it->second / nc * std::log2(it->second / nc);
    }
    const double base = std::min<double>(nc, static_cast<double>(feature_bins));
    return base < 2 ? 0.0 : h / std::log2(base);
  }
};

std::vector<double> as_doubles(const std::vector<std::size_t>& codes) {
  return {codes.begin(), codes.end()};
}

}  // namespace

TEST_SUITE("discretize") {
  TEST_CASE("equal frequency") {
    const std::vector<double> xs{5, 1, 3, 2, 4, 6, 8, 7};
    const DiscreteColumn d = discretize(xs, 4);
    CHECK(d.bin_count == 4);
    CHECK(d.values == std::vector<std::size_t>{2, 0, 1, 0, 1, 2, 3, 3});
    CHECK(d.bin_edges == std::vector<double>{2.5, 4.5, 6.5});
  }

  TEST_CASE("ties share a bin") {
    const std::vector<double> xs{1, 1, 1, 1, 2, 3};
    const DiscreteColumn d = discretize(xs, 3);
    CHECK(d.values[0] == d.values[3]);
    CHECK(d.values[4] != d.values[0]);
  }

  TEST_CASE("constant column collapses to one bin") {
    const std::vector<double> xs(10, 4.2);
    const DiscreteColumn d = discretize(xs, 5);
    CHECK(d.bin_count == 1);
    CHECK(entropy(d) == 0.0);
    CHECK(relative_uncertainty(d, xs.size()) == 0.0);
  }

  TEST_CASE("too few bins") {
    const std::vector<double> xs{1, 2};
    CHECK_THROWS_AS(discretize(xs, 1), Error);
  }
}

TEST_SUITE("uncertainty measures") {
  TEST_CASE("uniform codes give full relative uncertainty") {
    const std::vector<std::size_t> codes{0, 1, 2, 3, 0, 1, 2, 3};
    const DiscreteColumn d = as_discrete(codes);
    CHECK(entropy(d) == doctest::Approx(2.0));
    CHECK(relative_uncertainty(d, codes.size()) == doctest::Approx(1.0));
  }

  TEST_CASE("hand values") {
    const std::vector<std::size_t> codes{0, 0, 0, 1};
    // H = -(3/4 log2 3/4 + 1/4 log2 1/4) = 0.811278...
    CHECK(entropy(as_discrete(codes)) == doctest::Approx(0.8112781244591328));
  }

  TEST_CASE("sparse codes are renumbered") {
    const std::vector<std::size_t> codes{7, 2, 7, 40};
    const DiscreteColumn d = as_discrete(codes);
    CHECK(d.values == std::vector<std::size_t>{1, 0, 1, 2});
    CHECK(d.bin_count == 3);
    const std::vector<std::string> labels{"a", "a", "a", "b"};
    // class a sees codes {2, 7, 7} over 3 realized levels
    const double h = -(1.0 / 3 * std::log2(1.0 / 3) + 2.0 / 3 * std::log2(2.0 / 3));
    CHECK(conditional_ru(d, labels, "a") == doctest::Approx(h / std::log2(3.0)));
  }

  TEST_CASE("perfectly informative feature") {
    const std::vector<std::size_t> codes{0, 0, 1, 1, 2, 2};
    const std::vector<std::string> labels{"a", "a", "b", "b", "c", "c"};
    const DiscreteColumn d = as_discrete(codes);
    CHECK(symmetric_uncertainty(d, labels) == doctest::Approx(1.0));
    // Within each class the feature is constant.
    CHECK(conditional_ru(d, labels, "a") == 0.0);
    CHECK(bias_coefficient(d, labels, "b") == 1.0);
  }

  TEST_CASE("independent feature") {
    const std::vector<std::size_t> codes{0, 1, 0, 1};
    const std::vector<std::string> labels{"a", "a", "b", "b"};
    CHECK(symmetric_uncertainty(as_discrete(codes), labels) == doctest::Approx(0.0));
    CHECK(conditional_ru(as_discrete(codes), labels, "a") == doctest::Approx(1.0));
  }

  TEST_CASE("unknown class") {
    const std::vector<std::size_t> codes{0, 1};
    const std::vector<std::string> labels{"a", "b"};
    try {
      conditional_ru(as_discrete(codes), labels, "zzz");
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UnknownClass);
    }
  }

  TEST_CASE("random discrete data against the contingency oracle") {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 200; ++t) {
      const std::size_t n = 2 + rng() % 60;
      const std::size_t levels = 1 + rng() % 6;
      const std::size_t classes = 1 + rng() % 4;
      std::vector<std::size_t> codes(n);
      std::vector<std::string> labels(n);
      for (std::size_t k = 0; k < n; ++k) {
        codes[k] = rng() % levels;
        labels[k] = "c" + std::to_string(rng() % classes);
        // some dependence between the two
        if (rng() % 3 == 0) codes[k] = std::stoul(labels[k].substr(1));
      }
      const Table tab(codes, labels);
      const DiscreteColumn d = as_discrete(codes);
      CHECK(std::abs(entropy(d) - tab.h_a()) <= 1e-10);
      const double su = symmetric_uncertainty(d, labels);
      CHECK(std::abs(su - tab.su()) <= 1e-10);
      CHECK(su >= -1e-12);
      CHECK(su <= 1.0 + 1e-12);
      for (const auto& [cls, _] : tab.c) {
        const double ru = conditional_ru(d, labels, cls);
        CHECK(std::abs(ru - tab.class_ru(cls, d.bin_count)) <= 1e-10);
        CHECK(ru >= 0.0);
        CHECK(ru <= 1.0 + 1e-12);
      }
    }
  }
}

TEST_SUITE("select_features") {
  TEST_CASE("informative feature ranks first") {
    std::mt19937_64 rng(4);
    Matrix m(200, 3);
    std::vector<std::string> labels(200);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t k = 0; k < 200; ++k) {
      const bool pos = k % 2 == 0;
      labels[k] = pos ? "pos" : "neg";
      m(k, 0) = u(rng);
      m(k, 1) = (pos ? 1.0 : 0.0) + 0.1 * u(rng);
      m(k, 2) = u(rng);
    }
    const Dataset ds = make_dataset(std::move(m), {"noise_a", "signal", "noise_b"}, labels);
    const FeatureRanking r = select_features(ds, 1);
    CHECK(r.classes == std::vector<std::string>{"neg", "pos"});
    CHECK(r.selected == std::vector<std::size_t>{1});
    CHECK(r.ranked[0].name == "signal");
    // ten bins over a two-class split: SU = 2 * 1 / (log2(10) + 1)
    CHECK(r.ranked[0].su == doctest::Approx(2.0 / (std::log2(10.0) + 1.0)).epsilon(0.05));
    CHECK(r.ranked[1].su < 0.1);
    CHECK(r.ranked.size() == 3);
    CHECK(r.ranked[0].ru_per_class.size() == 2);
    for (const auto& s : r.ranked) {
      for (std::size_t j = 0; j < 2; ++j) {
        CHECK(s.bias_per_class[j] == doctest::Approx(1.0 - s.ru_per_class[j]));
      }
    }
  }

  TEST_CASE("duplicated feature ties keep index order") {
    const Dataset ds = make_dataset(Matrix{{1, 1}, {2, 2}, {3, 3}, {4, 4}}, {},
                                    std::vector<std::string>{"a", "a", "b", "b"});
    const FeatureRanking r = select_features(ds, 2, 2);
    CHECK(r.ranked[0].feature_index == 0);
    CHECK(r.ranked[1].feature_index == 1);
    CHECK(r.ranked[0].su == r.ranked[1].su);
  }

  TEST_CASE("scores match the oracle on binned columns") {
    std::mt19937_64 rng(12);
    for (int t = 0; t < 20; ++t) {
      const std::size_t n = 20 + rng() % 80;
      Matrix m(n, 2);
      std::vector<std::string> labels(n);
      std::normal_distribution<double> g(0.0, 1.0);
      for (std::size_t k = 0; k < n; ++k) {
        labels[k] = std::string(1, static_cast<char>('a' + rng() % 3));
        m(k, 0) = g(rng) + (labels[k] == "a" ? 2.0 : 0.0);
        m(k, 1) = std::floor(g(rng) * 2.0);
      }
      const Dataset ds = make_dataset(m, {}, labels);
      const FeatureRanking r = select_features(ds, 2, 5);
      for (const auto& s : r.ranked) {
        std::vector<double> col(n);
        for (std::size_t k = 0; k < n; ++k) col[k] = m(k, s.feature_index);
        const DiscreteColumn d = discretize(col, 5);
        const Table tab(d.values, labels);
        CHECK(std::abs(s.su - tab.su()) <= 1e-10);
        for (std::size_t j = 0; j < r.classes.size(); ++j) {
          CHECK(std::abs(s.ru_per_class[j] - tab.class_ru(r.classes[j], d.bin_count)) <= 1e-10);
        }
      }
    }
  }

  TEST_CASE("argument checks") {
    const Dataset unlabelled = make_dataset(Matrix{{1.0}, {2.0}});
    try {
      select_features(unlabelled, 1);
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::LabelsRequired);
    }
    const Dataset ds = make_dataset(Matrix{{1.0}, {2.0}}, {}, std::vector<std::string>{"a", "b"});
    CHECK_THROWS_AS(select_features(ds, 0), Error);
    CHECK_THROWS_AS(select_features(ds, 2), Error);
  }

  TEST_CASE("Pima runs end to end") {
    const Dataset ds =
        load_csv(adfcm::testing::data_path("pima.csv"), {true, "class", ','}, false);
    const FeatureRanking r = select_features(ds, 3);
    CHECK(r.selected.size() == 3);
    CHECK(r.ranked.front().su >= r.ranked.back().su);
    // glucose is the strongest single predictor in this data
    CHECK(r.ranked.front().name == "plas");
  }
}
