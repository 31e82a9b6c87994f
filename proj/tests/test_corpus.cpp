#include <gtest/gtest.h>

#include <sstream>

#include "hybridsim/corpus.hpp"
#include "test_util.hpp"

using namespace hybridsim;

namespace {

std::vector<SentencePair> parse(const std::string& text) {
    std::istringstream in(text);
    return parse_sts_tsv(in);
}

}  // namespace

TEST(ParseStsTsv, KoreanPair) {
    auto pairs = parse("한 여성이 브로콜리를 자르고 있다.\t한 여성이 칼로 브로콜리를 자르고 있다.\t4.25\n");
    ASSERT_EQ(pairs.size(), 1u);
    EXPECT_EQ(pairs[0].left, "한 여성이 브로콜리를 자르고 있다.");
    EXPECT_EQ(pairs[0].right, "한 여성이 칼로 브로콜리를 자르고 있다.");
    EXPECT_DOUBLE_EQ(pairs[0].gold_raw, 4.25);
    EXPECT_FALSE(pairs[0].gold.has_value());
    EXPECT_EQ(pairs[0].id, "1");
}

TEST(ParseStsTsv, BoundaryScoreZero) {
    auto pairs = parse("a\tb\t0\n");
    ASSERT_EQ(pairs.size(), 1u);
    EXPECT_EQ(pairs[0].gold_raw, 0.0);
}

TEST(ParseStsTsv, NonNumericScoreReportsLine) {
    try {
        parse("a\tb\tsix\n");
        FAIL() << "expected parse error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::parse);
        EXPECT_EQ(e.line(), 1u);
    }
}

TEST(ParseStsTsv, TooFewFieldsIsParseError) {
    EXPECT_ERROR_KIND(parse("a\tb\n"), ErrorKind::parse);
}

TEST(ParseStsTsv, OutOfRangeScore) {
    EXPECT_ERROR_KIND(parse("a\tb\t5.5\n"), ErrorKind::range);
    EXPECT_ERROR_KIND(parse("a\tb\t-0.1\n"), ErrorKind::range);
}

TEST(ParseStsTsv, CommentsBlankLinesAndExtraColumns) {
    auto pairs = parse("# header comment\n\nx y\tz\t3.5\tgenre\tsource\r\np\tq\t1\n");
    ASSERT_EQ(pairs.size(), 2u);
    EXPECT_EQ(pairs[0].id, "3");
    EXPECT_EQ(pairs[0].gold_raw, 3.5);
    EXPECT_EQ(pairs[1].id, "4");
}

TEST(ParseStsTsv, EmptySentenceRejected) {
    EXPECT_ERROR_KIND(parse("   \tb\t1\n"), ErrorKind::empty_sentence);
}

TEST(NormalizeScores, ExampleValues) {
    auto pairs = parse("a\tb\t4.25\nc\td\t0.667\ne\tf\t0\n");
    auto norm = normalize_scores(pairs, 0.0, 5.0);
    EXPECT_NEAR(*norm[0].gold, 0.85, 1e-15);
    EXPECT_NEAR(*norm[1].gold, 0.1334, 1e-15);
    EXPECT_EQ(*norm[2].gold, 0.0);
}

TEST(NormalizeScores, ConfigAndRangeErrors) {
    auto pairs = parse("a\tb\t4\n");
    EXPECT_ERROR_KIND(normalize_scores(pairs, 5.0, 5.0), ErrorKind::config);
    EXPECT_ERROR_KIND(normalize_scores(pairs, 0.0, 3.0), ErrorKind::range);
}

TEST(NormalizeScores, AffineOrderPreservingAndInvertible) {
    Rng rng(7);
    std::vector<SentencePair> pairs(1000);
    for (auto& p : pairs) {
        p.left = "a";
        p.right = "b";
        p.gold_raw = rng.uniform(0.0, 5.0);
    }
    const auto norm = normalize_scores(pairs, 0.0, 5.0);
    for (std::size_t i = 0; i < norm.size(); ++i) {
        EXPECT_NEAR(denormalize_score(*norm[i].gold, 0.0, 5.0), pairs[i].gold_raw, 1e-12);
        ASSERT_GE(*norm[i].gold, 0.0);
        ASSERT_LE(*norm[i].gold, 1.0);
        if (i > 0 && pairs[i - 1].gold_raw < pairs[i].gold_raw) {
            EXPECT_LT(*norm[i - 1].gold, *norm[i].gold);
        }
    }
}

TEST(WriteStsTsv, RoundTrip) {
    Rng rng(3);
    std::vector<SentencePair> pairs;
    for (int i = 0; i < 50; ++i) {
        SentencePair p;
        p.id = std::to_string(i + 1);
        p.left = "left " + std::to_string(i);
        p.right = "남자가 " + std::to_string(i * 7);
        p.gold_raw = rng.uniform(0.0, 5.0);
        pairs.push_back(p);
    }
    std::ostringstream out;
    write_sts_tsv(out, pairs);
    EXPECT_EQ(parse(out.str()), pairs);
}

TEST(Tokenize, Whitespace) {
    auto t = tokenize("the cat sat");
    EXPECT_EQ(t.tokens, (std::vector<std::string>{"the", "cat", "sat"}));
    EXPECT_EQ(t.length(), 3u);
    EXPECT_EQ(tokenize("  a\t\tb \n").tokens, (std::vector<std::string>{"a", "b"}));
}

TEST(Tokenize, SingleToken) { EXPECT_EQ(tokenize("a").length(), 1u); }

TEST(Tokenize, EmptyIsError) {
    EXPECT_ERROR_KIND(tokenize("   "), ErrorKind::empty_sentence);
    EXPECT_ERROR_KIND(tokenize(""), ErrorKind::empty_sentence);
}

TEST(Tokenize, PretokenizedPreservesTokens) {
    auto t = tokenize("자르/VV 고/ECE 있/VXV", TokenizeMode::pretokenized);
    EXPECT_EQ(t.tokens, (std::vector<std::string>{"자르/VV", "고/ECE", "있/VXV"}));
    EXPECT_ERROR_KIND(tokenize("a  b", TokenizeMode::pretokenized), ErrorKind::parse);
}

TEST(Tokenize, NfcNormalizesDecomposedHangul) {
    // U+1112 U+1161 U+11AB (conjoining jamo) composes to U+D55C.
    const std::string decomposed = "\xE1\x84\x92\xE1\x85\xA1\xE1\x86\xAB";
    EXPECT_EQ(tokenize(decomposed).tokens[0], "한");
    EXPECT_EQ(nfc("e\xCC\x81"), "\xC3\xA9");
}
