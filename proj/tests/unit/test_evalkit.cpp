#include <gtest/gtest.h>

#include <algorithm>

#include "oracles.hpp"
#include "tabletitle/corpus/tokenize.hpp"
#include "tabletitle/error.hpp"
#include "tabletitle/evalkit/baselines.hpp"
#include "tabletitle/evalkit/report.hpp"
#include "tabletitle/random.hpp"

using namespace tabletitle;
using namespace tabletitle::evalkit;
using corpus::tokenize;
using corpus::Tokens;

namespace {

double rn(const std::string& c, const std::string& r, std::size_t n) { return rouge_n(tokenize(c), tokenize(r), n); }
double rl(const std::string& c, const std::string& r) { return rouge_l(tokenize(c), tokenize(r)); }

extractor::TableContext with_title(const std::string& text) {
  extractor::TableContext c;
  c.page_title = tokenize(text);
  return c;
}

}  // namespace

TEST(RougeN, WorkedExamples) {
  EXPECT_DOUBLE_EQ(rn("a b c", "a b c", 1), 1.0);
  EXPECT_DOUBLE_EQ(rn("a b", "c d", 1), 0.0);
  EXPECT_NEAR(rn("the cat sat", "the cat", 1), 0.8, 1e-12);
}

TEST(RougeN, HandComputedTable) {
  const auto& cases = tabletitle::testing::rouge_n_cases();
  ASSERT_EQ(cases.size(), 20u);
  for (const auto& c : cases)
    EXPECT_NEAR(rn(c.candidate, c.reference, c.n), c.expected, 1e-9)
        << '"' << c.candidate << "\" vs \"" << c.reference << "\" n=" << c.n;
}

TEST(RougeN, Symmetric) {
  Rng rng(2);
  for (int trial = 0; trial < 500; ++trial) {
    Tokens a, b;
    for (std::size_t k = rng.below(8); k > 0; --k) a.push_back(std::string(1, static_cast<char>('a' + rng.below(4))));
    for (std::size_t k = rng.below(8); k > 0; --k) b.push_back(std::string(1, static_cast<char>('a' + rng.below(4))));
    for (std::size_t n : {1u, 2u}) EXPECT_DOUBLE_EQ(rouge_n(a, b, n), rouge_n(b, a, n));
    EXPECT_DOUBLE_EQ(rouge_l(a, b), rouge_l(b, a));
    const auto s = score(a, b);
    for (double v : {s.rouge1, s.rouge2, s.rougeL}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

// With F1 = 2m / (c + r), the unigram recall m / r is recoverable.
TEST(RougeN, AppendingReferenceTokenNeverLowersRecall) {
  Rng rng(3);
  const auto recall = [](const Tokens& c, const Tokens& r) {
    return rouge_n(c, r, 1) * static_cast<double>(c.size() + r.size()) / 2.0 / static_cast<double>(r.size());
  };
  for (int trial = 0; trial < 500; ++trial) {
    Tokens c, r;
    for (std::size_t k = rng.below(8); k > 0; --k) c.push_back(std::string(1, static_cast<char>('a' + rng.below(5))));
    for (std::size_t k = 1 + rng.below(8); k > 0; --k) r.push_back(std::string(1, static_cast<char>('a' + rng.below(5))));
    Tokens longer = c;
    longer.push_back(r[rng.below(r.size())]);
    EXPECT_GE(recall(longer, r), recall(c, r) - 1e-12);
  }
}

TEST(RougeL, WorkedExamples) {
  EXPECT_DOUBLE_EQ(rl("a b c", "a b c"), 1.0);
  EXPECT_EQ(lcs_length(tokenize("a x b y c"), tokenize("a b c")), 3u);
  EXPECT_NEAR(rl("a x b y c", "a b c"), 0.75, 1e-12);
  EXPECT_DOUBLE_EQ(rl("a b", ""), 0.0);
}

TEST(RougeL, MatchesBruteForceLcsUpToLengthSix) {
  const tabletitle::testing::LcsOracle oracle(6);
  for (std::size_t a = 0; a < oracle.count(); ++a)
    for (std::size_t b = 0; b < oracle.count(); ++b) {
      const auto& ta = oracle.tokens(a);
      const auto& tb = oracle.tokens(b);
      const std::size_t l = oracle.lcs(a, b);
      ASSERT_EQ(lcs_length(ta, tb), l) << corpus::join(ta) << " / " << corpus::join(tb);
      double expected = 0;
      if (l > 0) {
        const double p = static_cast<double>(l) / static_cast<double>(ta.size());
        const double r = static_cast<double>(l) / static_cast<double>(tb.size());
        expected = 2 * p * r / (p + r);
      }
      ASSERT_EQ(rouge_l(ta, tb), expected);
    }
}

TEST(Baselines, PageTitle) {
  EXPECT_EQ(baseline_page_title(with_title("Nicole Eggert - Wikipedia")), "nicole eggert");
  EXPECT_EQ(baseline_page_title(with_title("Filmography of somebody")), "filmography of somebody");
  EXPECT_EQ(baseline_page_title(with_title("")), "");
  EXPECT_EQ(baseline_page_title(with_title("Shop | Gifts | Example.com")), "shop | gifts");
  EXPECT_EQ(baseline_page_title(with_title("- leading")), "- leading");
  EXPECT_EQ(baseline_page_title(with_title("x-ray results")), "x-ray results");
}

TEST(Baselines, SectionHeading) {
  extractor::TableContext c = with_title("Nicole Eggert - Wikipedia");
  EXPECT_EQ(baseline_section_heading(c), "nicole eggert");
  c.section_headings = {{1, tokenize("Nicole Eggert")}, {2, tokenize("Filmography[edit]")}};
  EXPECT_EQ(baseline_section_heading(c), "filmography");
  c.section_headings = {{1, tokenize("A")}, {2, tokenize("D")}};
  EXPECT_EQ(baseline_section_heading(c), "d");
  c.section_headings = {{2, tokenize("[edit]")}};
  EXPECT_EQ(baseline_section_heading(c), "nicole eggert");
}

TEST(Evaluate, PerfectEmptyAndMismatch) {
  const std::vector<std::string> refs{"list of mayors", "filmography", "the cat sat"};
  const std::vector<SystemPredictions> systems{{"perfect", refs}, {"empty", {"", "", ""}}};
  const auto report = evaluate(systems, refs);
  ASSERT_EQ(report.systems.size(), 2u);
  EXPECT_DOUBLE_EQ(report.systems[0].mean.rouge1, 1.0);
  EXPECT_DOUBLE_EQ(report.systems[0].mean.rougeL, 1.0);
  EXPECT_EQ(report.systems[0].n, 3u);
  EXPECT_EQ(report.systems[1].n_empty, 3u);
  EXPECT_DOUBLE_EQ(report.systems[1].mean.rouge1, 0.0);
  const std::vector<SystemPredictions> bad{{"short", {"a"}}};
  try {
    evaluate(bad, refs);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LengthMismatch);
  }
}

TEST(Evaluate, HandAveragedTwoSystems) {
  const std::vector<std::string> refs{"the cat", "a b c", "x y"};
  const std::vector<SystemPredictions> systems{{"s1", {"the cat sat", "a b c", "q"}},
                                               {"s2", {"the cat", "c b a", "x y"}}};
  const auto report = evaluate(systems, refs, 3);
  // s1: rouge1 (0.8 + 1 + 0) / 3, rouge2 (2/3 + 1 + 0) / 3, rougeL (0.8 + 1 + 0) / 3
  EXPECT_NEAR(report.systems[0].mean.rouge1, 1.8 / 3, 1e-12);
  EXPECT_NEAR(report.systems[0].mean.rouge2, (2.0 / 3 + 1) / 3, 1e-12);
  EXPECT_NEAR(report.systems[0].mean.rougeL, 1.8 / 3, 1e-12);
  // s2: rouge1 (1 + 1 + 1) / 3, rouge2 (1 + 0 + 1) / 3, rougeL (1 + 1/3 + 1) / 3
  EXPECT_NEAR(report.systems[1].mean.rouge1, 1.0, 1e-12);
  EXPECT_NEAR(report.systems[1].mean.rouge2, 2.0 / 3, 1e-12);
  EXPECT_NEAR(report.systems[1].mean.rougeL, (2 + 1.0 / 3) / 3, 1e-12);
  for (const auto& s : report.systems) {
    double sum = 0;
    for (const auto& row : s.rows) sum += row.scores.rouge1;
    EXPECT_NEAR(s.mean.rouge1, sum / static_cast<double>(s.rows.size()), 1e-9);
  }
}

TEST(Evaluate, JobsDoNotChangeResults) {
  std::vector<std::string> refs, preds;
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    std::string r, p;
    for (std::size_t k = 1 + rng.below(6); k > 0; --k) r += std::string(1, static_cast<char>('a' + rng.below(5))) + " ";
    for (std::size_t k = rng.below(6); k > 0; --k) p += std::string(1, static_cast<char>('a' + rng.below(5))) + " ";
    refs.push_back(r);
    preds.push_back(p);
  }
  const std::vector<SystemPredictions> systems{{"sys", preds}};
  EXPECT_EQ(report_tsv(evaluate(systems, refs, 1)), report_tsv(evaluate(systems, refs, 4)));
}

TEST(Report, TsvLayout) {
  const std::vector<std::string> refs{"a b"};
  const std::vector<SystemPredictions> systems{{"copy_generate", {"a b"}}};
  const auto report = evaluate(systems, refs);
  EXPECT_EQ(report_tsv(report),
            "system\trouge1\trouge2\trougeL\tn\tn_empty\ncopy_generate\t1.000000\t1.000000\t1.000000\t1\t0\n");
  const std::string table = render_table(report);
  EXPECT_NE(table.find("ROUGE-L"), std::string::npos);
  EXPECT_NE(table.find("copy_generate"), std::string::npos);
}
