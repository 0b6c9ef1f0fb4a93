// tests/mace_test.cc

// Copyright 2026  The strongcrowd Authors

// See ../../COPYING for clarification regarding multiple authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "oracles.h"
#include "scenarios.h"
#include "strongcrowd/errors.h"
#include "strongcrowd/mace.h"

using namespace strongcrowd;
using Raw = BinaryOpinionTable::RawOpinion;

namespace {

AnnotatorModel RandomModel(Rng &rng, std::size_t workers) {
  AnnotatorModel m;
  for (std::size_t w = 0; w < workers; ++w) {
    m.trust.push_back(rng.Uniform(0.01, 0.99));
    m.spam_yes.push_back(rng.Uniform(0.01, 0.99));
  }
  return m;
}

}  // namespace

TEST_CASE("build_binary_instances: yes iff tagged, explicit no otherwise") {
  std::vector<std::string> vocab{"dog", "siren"};
  std::vector<SegmentAnnotation> ann{{"w1", {"f", 0, 10}, {"dog"}},
                                     {"w2", {"f", 0, 10}, {}}};
  auto t = build_binary_instances(ann, vocab);
  REQUIRE(t.NumItems() == 2);
  CHECK(t.NumOpinions() == 4);
  CHECK(t.LabelOf(0) == "dog");
  CHECK(t.SegmentOf(1) == SegmentSpec{"f", 0, 10});
  auto dog = t.OpinionsOf(0), siren = t.OpinionsOf(1);
  CHECK(t.workers()[dog[0].worker] == "w1");
  CHECK(dog[0].yes);
  CHECK_FALSE(dog[1].yes);
  CHECK_FALSE(siren[0].yes);
  CHECK_FALSE(siren[1].yes);
}

TEST_CASE("build_binary_instances: errors") {
  std::vector<std::string> vocab{"dog"};
  std::vector<SegmentAnnotation> dup{{"w1", {"f", 0, 10}, {}},
                                     {"w1", {"f", 0, 10}, {"dog"}}};
  CHECK_THROWS_AS(build_binary_instances(dup, vocab), InputError);
  std::vector<SegmentAnnotation> unknown{{"w1", {"f", 0, 10}, {"cat"}}};
  CHECK_THROWS_AS(build_binary_instances(unknown, vocab), InputError);
  std::vector<SegmentSpec> known{{"f", 5, 10}};
  std::vector<SegmentAnnotation> stray{{"w1", {"f", 0, 10}, {}}};
  CHECK_THROWS_AS(build_binary_instances(stray, vocab, known), InputError);
}

TEST_CASE("e_step worked example: two confident yes answers") {
  std::vector<Raw> raw{{0, 0, true}, {0, 1, true}};
  auto t = BinaryOpinionTable::FromOpinions(1, {"a", "b"}, raw);
  AnnotatorModel m{{0.8, 0.8}, {0.5, 0.5}};
  auto r = e_step(t, m);
  CHECK(std::abs(r.posterior_yes[0] - 0.405 / 0.410) <= 1e-12);
  auto o = oracle::EnumerateLatents({{{0, true}, {1, true}}}, m.trust, m.spam_yes);
  CHECK(std::abs(r.log_likelihood - o.log_likelihood) <= 1e-12);
  for (int w = 0; w < 2; ++w) {
    CHECK(std::abs(r.counts.trust[w] - o.trust[w]) <= 1e-12);
    CHECK(std::abs(r.counts.spam[w] - o.spam[w]) <= 1e-12);
  }
  // The prediction threshold uses >=.
  auto tags_table = build_binary_instances(
      std::vector<SegmentAnnotation>{{"a", {"f", 0, 10}, {"A"}}},
      std::vector<std::string>{"A"});
  std::vector<double> p{r.posterior_yes[0]};
  CHECK(predict_tags(tags_table, p).at({"f", 0, 10}) == TagSet{"A"});
}

TEST_CASE("e_step degenerate trust values") {
  std::vector<Raw> raw{{0, 0, true}, {0, 1, true}, {1, 0, false}};
  auto t = BinaryOpinionTable::FromOpinions(3, {"a", "b"}, raw);
  auto certain = e_step(t, {{1.0, 1.0}, {0.5, 0.5}});
  CHECK(certain.posterior_yes[0] == 1.0);
  CHECK(certain.posterior_yes[1] == 0.0);
  CHECK(certain.posterior_yes[2] == 0.5);  // no opinions: prior
  CHECK(certain.empty_items == 1);
  auto blind = e_step(t, {{0.0, 0.0}, {0.3, 0.6}});
  for (double p : blind.posterior_yes) CHECK(p == doctest::Approx(0.5));
  // Conflicting answers from fully trusted workers cannot happen.
  std::vector<Raw> clash{{0, 0, true}, {0, 1, false}};
  auto c = BinaryOpinionTable::FromOpinions(1, {"a", "b"}, clash);
  auto r = e_step(c, {{1.0, 1.0}, {0.5, 0.5}});
  CHECK(r.impossible_items == 1);
  CHECK(r.posterior_yes[0] == 0.5);
}

TEST_CASE("property: e_step matches latent enumeration") {
  Rng rng(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<oracle::ItemOpinions> items;
    auto t = scenario::RandomTable(rng, 4, 3, &items);
    auto m = RandomModel(rng, t.NumWorkers());
    const double prior = rng.Uniform(0.1, 0.9);
    auto r = e_step(t, m, {1.0 - prior, prior});
    auto o = oracle::EnumerateLatents(items, m.trust, m.spam_yes, prior);
    for (std::size_t i = 0; i < t.NumItems(); ++i)
      worst = std::max(worst, std::abs(r.posterior_yes[i] - o.posterior_yes[i]));
    worst = std::max(worst, std::abs(r.log_likelihood - o.log_likelihood));
    for (std::size_t w = 0; w < t.NumWorkers(); ++w) {
      worst = std::max(worst, std::abs(r.counts.trust[w] - o.trust[w]));
      worst = std::max(worst, std::abs(r.counts.spam_yes[w] - o.spam_yes[w]));
      worst = std::max(worst, std::abs(r.counts.spam_no[w] - o.spam_no[w]));
    }
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("m_step") {
  ExpectedCounts c{{9.0}, {1.0}, {0.25}, {0.75}};
  auto m = m_step(c, 0.0);
  CHECK(m.trust[0] == doctest::Approx(0.9));
  CHECK(m.spam_yes[0] == doctest::Approx(0.25));
  ExpectedCounts zero{{0.0}, {0.0}, {0.0}, {0.0}};
  m = m_step(zero, 0.01);
  CHECK(m.trust[0] == 0.5);
  CHECK(m.spam_yes[0] == 0.5);
  m = m_step(zero, 0.0);
  CHECK(m.trust[0] == 0.5);
  // Counts from the worked example, against the enumeration oracle.
  auto o = oracle::EnumerateLatents({{{0, true}, {1, true}}}, {0.8, 0.8},
                                    {0.5, 0.5});
  std::vector<Raw> raw{{0, 0, true}, {0, 1, true}};
  auto t = BinaryOpinionTable::FromOpinions(1, {"a", "b"}, raw);
  auto r = e_step(t, {{0.8, 0.8}, {0.5, 0.5}});
  m = m_step(r.counts, 0.01);
  CHECK(m.trust[0] == doctest::Approx((o.trust[0] + 0.01) /
                                      (o.trust[0] + o.spam[0] + 0.02)));
}

TEST_CASE("property: EM is monotone without smoothing") {
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    auto t = scenario::RandomTable(rng, 30, 6);
    MaceOptions opt;
    opt.smoothing = 0.0;
    opt.iterations = 40;
    opt.tolerance = 0.0;
    auto run = run_em(t, RandomModel(rng, t.NumWorkers()), opt);
    for (std::size_t k = 1; k < run.trace.size(); ++k)
      CHECK(run.trace[k] >= run.trace[k - 1] - 1e-9);
  }
}

TEST_CASE("run_mace: best restart, determinism, thread independence") {
  auto pool = scenario::MakeSpammerPool(4, 10, 3, 60);
  auto t = build_binary_instances(pool.annotations, DefaultClasses());
  MaceOptions opt;
  opt.seed = 17;
  opt.threads = 1;
  auto a = run_mace(t, opt);
  opt.threads = 4;
  auto b = run_mace(t, opt);
  CHECK(a.posteriors.yes == b.posteriors.yes);
  CHECK(a.model.trust == b.model.trust);
  CHECK(a.restart_log_likelihoods.size() == 10);
  for (double ll : a.restart_log_likelihoods)
    CHECK(a.posteriors.log_likelihood >= ll);
  CHECK(a.posteriors.log_likelihood ==
        a.restart_log_likelihoods[a.posteriors.restart]);
  CHECK(a.posteriors.iterations >= 1);
  CHECK(a.posteriors.iterations <= 50);
  for (double p : a.posteriors.yes) {
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
  }
  MaceOptions bad;
  bad.restarts = 0;
  CHECK_THROWS_AS(bad.Validate(), ConfigError);
}

TEST_CASE("spammers rank below diligent workers") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    auto pool = scenario::MakeSpammerPool(seed);
    auto t = build_binary_instances(pool.annotations, DefaultClasses());
    MaceOptions opt;
    opt.seed = seed;
    auto comp = Competences(t, run_mace(t, opt).model);
    double worst_diligent = 1.0, best_spammer = 0.0;
    for (const auto &w : pool.workers) {
      if (!comp.count(w.worker_id)) continue;
      const double theta = comp[w.worker_id];
      if (w.population == "spammer")
        best_spammer = std::max(best_spammer, theta);
      else
        worst_diligent = std::min(worst_diligent, theta);
    }
    CHECK(best_spammer < worst_diligent);
  }
}

TEST_CASE("property: permuting workers and items permutes the output") {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<oracle::ItemOpinions> items;
    auto t = scenario::RandomTable(rng, 12, 5, &items);
    const std::size_t I = t.NumItems(), W = t.NumWorkers();
    std::vector<std::size_t> wp(W), ip(I);
    std::iota(wp.begin(), wp.end(), 0);
    std::iota(ip.begin(), ip.end(), 0);
    for (std::size_t k = W; k > 1; --k) std::swap(wp[k - 1], wp[rng.Below(k)]);
    for (std::size_t k = I; k > 1; --k) std::swap(ip[k - 1], ip[rng.Below(k)]);
    std::vector<std::string> names(W);
    for (std::size_t w = 0; w < W; ++w) names[wp[w]] = t.workers()[w];
    std::vector<Raw> raw;
    for (std::size_t i = 0; i < I; ++i)
      for (auto [w, yes] : items[i])
        raw.push_back({ip[i], static_cast<std::uint32_t>(wp[w]), yes});
    auto p = BinaryOpinionTable::FromOpinions(I, names, raw);
    auto m = RandomModel(rng, W);
    AnnotatorModel pm = m;
    for (std::size_t w = 0; w < W; ++w) {
      pm.trust[wp[w]] = m.trust[w];
      pm.spam_yes[wp[w]] = m.spam_yes[w];
    }
    auto r = e_step(t, m), rp = e_step(p, pm);
    for (std::size_t i = 0; i < I; ++i)
      CHECK(r.posterior_yes[i] == doctest::Approx(rp.posterior_yes[ip[i]]).epsilon(1e-12));
    for (std::size_t w = 0; w < W; ++w)
      CHECK(r.counts.trust[w] == doctest::Approx(rp.counts.trust[wp[w]]).epsilon(1e-12));
    CHECK(r.log_likelihood == doctest::Approx(rp.log_likelihood).epsilon(1e-12));
  }
}

TEST_CASE("predict_tags") {
  std::vector<std::string> vocab{"A", "B"};
  std::vector<SegmentAnnotation> ann{{"w", {"f", 0, 10}, {}},
                                     {"w", {"f", 1, 10}, {}}};
  auto t = build_binary_instances(ann, vocab);
  std::vector<double> p{0.5, 0.49, 0.0, 0.0};
  auto tags = predict_tags(t, p);
  CHECK(tags.at({"f", 0, 10}) == TagSet{"A"});
  CHECK(tags.at({"f", 1, 10}).empty());
  CHECK_THROWS_AS(predict_tags(t, p, 1.0), ConfigError);
  std::vector<double> short_p{0.5};
  CHECK_THROWS_AS(predict_tags(t, short_p), InputError);
}

TEST_CASE("filter_by_competence") {
  std::vector<SegmentAnnotation> ann{{"a", {"f", 0, 10}, {}},
                                     {"b", {"f", 0, 10}, {"A"}}};
  std::map<std::string, double> comp{{"a", 0.3}, {"b", 0.9}};
  CHECK(filter_by_competence(ann, comp, 0.0).size() == 2);
  CHECK(filter_by_competence(ann, comp, 1.0).empty());
  auto kept = filter_by_competence(ann, comp, 0.6);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].worker_id == "b");
  comp.erase("a");
  CHECK_THROWS_AS(filter_by_competence(ann, comp, 0.5), InputError);
}
