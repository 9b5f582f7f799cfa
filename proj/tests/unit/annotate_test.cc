/*
 * Copyright 2026 The Pricelens Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "pricelens/annotate.hpp"
#include "support.hpp"
// After Eigen: the resolver header pulled in by the HTTP library defines _res.
#include "mock_llm.hpp"

namespace pricelens {
namespace {

std::string fixture_text(const std::string& name) {
  return read_file(testing::fixture("prompts/" + name));
}

TEST(Prompts, TemplatesMatchGoldenFiles) {
  EXPECT_EQ(std::string(prompt_template(AnnotationKind::refund)), fixture_text("refund_v1.txt"));
  EXPECT_EQ(std::string(prompt_template(AnnotationKind::industry)), fixture_text("industry_v1.txt"));
}

TEST(Prompts, RenderedPromptsMatchGoldenFiles) {
  const std::vector<std::string> refund = {"No refunds.", "", "Full refund available upon request."};
  EXPECT_EQ(build_prompt(AnnotationKind::refund, refund), fixture_text("refund_v1_rendered.txt"));
  const std::vector<std::string> industry = {
      "Coronavirus (COVID-19) data that has been gathered and unified from trusted sources. "
      "This data is provided to the public by Salesforce, MuleSoft, and Tableau at no cost to "
      "help you make better decisions,\n  fast."};
  EXPECT_EQ(build_prompt(AnnotationKind::industry, industry), fixture_text("industry_v1_rendered.txt"));
}

TEST(Prompts, ContentChecks) {
  const std::vector<std::string> one = {"x"};
  const auto refund = build_prompt(AnnotationKind::refund, one);
  EXPECT_NE(refund.find("Return the result as a JSON array of integers"), std::string::npos);
  const auto industry = build_prompt(AnnotationKind::industry, one);
  std::size_t last = 0;
  for (auto name : kIndustryNames) {
    const auto pos = industry.find("- " + std::string(name) + ":");
    ASSERT_NE(pos, std::string::npos) << name;
    EXPECT_GT(pos, last);
    last = pos;
  }
  const std::vector<std::string> with_blank = {"first", "   ", "third"};
  const auto p = build_prompt(AnnotationKind::refund, with_blank);
  EXPECT_NE(p.find("1. first\n2. (empty)\n3. third\n"), std::string::npos);
}

TEST(ParseRefund, SampleResponse) {
  EXPECT_EQ(parse_refund(fixture_text("refund_v1_response.txt"), 5), (std::vector<int>{2, 0, 4, 1, 3}));
  EXPECT_EQ(parse_refund("sure! [1,2]", 2), (std::vector<int>{1, 2}));
  EXPECT_EQ(parse_refund("levels [a] then [3, 4]", 2), (std::vector<int>{3, 4}));
}

TEST(ParseRefund, Errors) {
  try {
    parse_refund("[7]", 1);
    FAIL() << "expected a range error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("index 0"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_refund("[1,2,3]", 2), ParseError);
  EXPECT_THROW(parse_refund("no array here", 1), ParseError);
  EXPECT_THROW(parse_refund("[-1]", 1), ParseError);
}

TEST(ParseIndustry, SampleResponse) {
  const auto v = parse_industry(fixture_text("industry_v1_response.txt"), 1);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0][3], 1.0);
  EXPECT_EQ(v[0][0], 0.1);
  EXPECT_EQ(*std::max_element(v[0].begin(), v[0].end()), 1.0);
}

TEST(ParseIndustry, RenormalisesNearOne) {
  const auto v = parse_industry("[0.5, 0.9999995, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]\n\n"
                                "[1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0.2]\n", 2);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0][1], 1.0);
  EXPECT_NEAR(v[0][0], 0.5 / 0.9999995, 1e-15);
  EXPECT_EQ(v[1][11], 0.2);
}

TEST(ParseIndustry, Errors) {
  EXPECT_THROW(parse_industry("[1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]", 1), ParseError);
  EXPECT_THROW(parse_industry("[0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5]", 1),
               ParseError);
  EXPECT_THROW(parse_industry("[1, 1.5, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]", 1), ParseError);
  EXPECT_THROW(parse_industry("[1, -0.1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]", 1), ParseError);
  EXPECT_THROW(parse_industry("[1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]", 2), ParseError);
  try {
    parse_industry("[1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]\n[1, 2]", 2);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(FallbackRefund, PromptExemplars) {
  const std::vector<std::pair<std::string, int>> cases = {
      {"No refunds.", 0},
      {"Refunds are not offered on this product.", 0},
      {"This product is non-refundable.", 0},
      {"Refunds not applicable.", 0},
      {"This product does not have a defined refund policy.", 1},
      {"Refund policy will be discussed...", 1},
      {"Refunds are not specified for this product.", 1},
      {"No refunds. Please utilize trial version before purchase.", 2},
      {"Please request a free sample before buying.", 2},
      {"Not Applicable.", 2},
      {"This is a free sample.", 2},
      {"All sales are final due to digital nature.", 2},
      {"No refunds but contact us at ...", 3},
      {"Refunds are not offered, but we will fix issues.", 3},
      {"Please contact support@... for assistance.", 3},
      {"Full refund available upon request.", 4},
      {"Refund only if subscription is canceled within 90 days.", 4},
      {"Refunds issued for valid reasons only.", 4},
  };
  for (const auto& [text, level] : cases) EXPECT_EQ(fallback_refund(text), level) << text;
  EXPECT_EQ(fallback_refund(""), 1);
  EXPECT_EQ(fallback_refund("Quarterly updates delivered by API."), 1);
}

TEST(FallbackIndustry, MaxIsOneAndKeywordsSteer) {
  const auto health = fallback_industry("Clinical trial outcomes and patient disease records for hospitals");
  EXPECT_EQ(*std::max_element(health.begin(), health.end()), 1.0);
  EXPECT_EQ(dominant_industry(health), 3u);
  for (double v : health) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
  const auto none = fallback_industry("zzz qqq");
  EXPECT_TRUE(std::all_of(none.begin(), none.end(), [](double v) { return v == 1.0; }));
  EXPECT_EQ(fallback_industry("Stock market trading prices"), fallback_industry("Stock market trading prices"));
}

TEST(Annotate, OfflineRoutesToFallback) {
  const std::vector<std::string> texts = {"No refunds.", "Full refund available upon request.", ""};
  EXPECT_EQ(annotate_refund(texts, {}), (std::vector<int>{0, 4, 1}));
  const std::vector<std::string> docs = {"satellite climate pollution readings"};
  EXPECT_EQ(annotate_industry(docs, {})[0], fallback_industry(docs[0]));
}

TEST(Annotate, FillsOnlyMissingValues) {
  std::vector<DataProduct> products(2);
  products[0].refund_text = "No refunds.";
  products[0].name = "Game telemetry";
  products[1].refund_policy = 3;
  products[1].refund_text = "No refunds.";
  IndustryScores fixed{};
  fixed[5] = 1.0;
  products[1].industry_scores = fixed;
  annotate_products(products, {});
  EXPECT_EQ(products[0].refund_policy, 0);
  ASSERT_TRUE(products[0].industry_scores.has_value());
  EXPECT_EQ(products[1].refund_policy, 3);
  EXPECT_EQ(products[1].industry_scores, fixed);
}

EndpointConfig endpoint_for(const testing::MockLlm& server) {
  EndpointConfig e;
  e.url = server.url();
  e.backoff_ms = 1;
  e.retries = 2;
  e.timeout_seconds = 5;
  return e;
}

TEST(Llm, EchoesFixtureResponse) {
  const std::string fixture = fixture_text("refund_v1_response.txt");
  testing::MockLlm server([&](const std::string&) { return fixture; });
  ::setenv("PRICELENS_TEST_KEY", "secret", 1);
  auto e = endpoint_for(server);
  e.api_key_env = "PRICELENS_TEST_KEY";
  EXPECT_EQ(call_llm(e, "prompt text"), fixture);
  const auto bodies = server.bodies();
  ASSERT_EQ(bodies.size(), 1u);
  EXPECT_EQ(bodies[0]["temperature"], 0);
  EXPECT_EQ(bodies[0]["model"], "deepseek-chat");
  EXPECT_EQ(bodies[0]["messages"][0]["content"], "prompt text");
  EXPECT_EQ(server.auth_headers()[0], "Bearer secret");
}

TEST(Llm, RetriesThenRaisesTransportError) {
  testing::MockLlm server([](const std::string&) { return std::string("[1]"); }, 100);
  const auto e = endpoint_for(server);
  try {
    call_llm(e, "p");
    FAIL() << "expected a transport error";
  } catch (const TransportError& err) {
    EXPECT_EQ(err.status(), 500);
  }
  EXPECT_EQ(server.requests(), e.retries + 1);
}

TEST(Llm, RecoversWithinRetryBudget) {
  testing::MockLlm server([](const std::string&) { return std::string("[1]"); }, 2);
  EXPECT_EQ(call_llm(endpoint_for(server), "p"), "[1]");
  EXPECT_EQ(server.requests(), 3);
}

TEST(Llm, UnreachableEndpointIsATransportError) {
  EndpointConfig e;
  e.url = "http://127.0.0.1:1/v1";
  e.retries = 1;
  e.backoff_ms = 1;
  e.timeout_seconds = 1;
  EXPECT_THROW(call_llm(e, "p"), TransportError);
}

TEST(Llm, CachesResponses) {
  testing::MockLlm server([](const std::string& prompt) { return "[" + std::to_string(prompt.size() % 5) + "]"; });
  auto e = endpoint_for(server);
  e.cache_dir = testing::scratch_dir("llm-cache").string();
  const auto first = call_llm(e, "hello");
  EXPECT_EQ(call_llm(e, "hello"), first);
  EXPECT_EQ(server.requests(), 1);
  call_llm(e, "other");
  EXPECT_EQ(server.requests(), 2);
  e.model = "another-model";
  call_llm(e, "hello");
  EXPECT_EQ(server.requests(), 3);
}

TEST(Llm, BatchesPreserveOrder) {
  // Reply with one level per numbered input line: its length modulo 5.
  testing::MockLlm server([](const std::string& prompt) {
    std::string out = "[";
    std::size_t pos = prompt.find("Input texts:\n");
    std::istringstream lines(prompt.substr(pos + 13));
    std::string line;
    bool first = true;
    while (std::getline(lines, line)) {
      if (line.empty()) continue;
      const auto text = line.substr(line.find(". ") + 2);
      out += (first ? "" : ",") + std::to_string(text.size() % 5);
      first = false;
    }
    return out + "]";
  });
  auto e = endpoint_for(server);
  e.batch_size = 3;
  std::vector<std::string> texts;
  std::vector<int> expected;
  for (int i = 0; i < 8; ++i) {
    texts.push_back(std::string(static_cast<std::size_t>(i + 3), 'x'));
    expected.push_back((i + 3) % 5);
  }
  EXPECT_EQ(annotate_refund(texts, e), expected);
  EXPECT_EQ(server.requests(), 3);
}

}  // namespace
}  // namespace pricelens
