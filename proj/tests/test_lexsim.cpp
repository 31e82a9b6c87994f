#include <gtest/gtest.h>

#include <cmath>

#include "hybridsim/lexsim.hpp"
#include "test_util.hpp"

using namespace hybridsim;

namespace {

SentenceMatrix dense(const Matrix& m) { return SentenceMatrix::dense(m); }

SentenceMatrix random_sentence(Rng& rng, std::size_t max_len = 8, std::size_t dim = 0) {
    const std::size_t l = 1 + rng.below(max_len);
    const std::size_t e = dim ? dim : 1 + rng.below(8);
    return dense(testutil::random_matrix(rng, l, e));
}

}  // namespace

TEST(Cosine, Examples) {
    const std::vector<double> x{1, 0}, y{0, 1};
    EXPECT_EQ(cosine(x, x), 1.0);
    EXPECT_EQ(cosine(x, y), 0.0);
    const std::vector<double> a{1, 2, 3}, b{4, 5, 6};
    EXPECT_NEAR(cosine(a, b), 0.9746318461970762, 1e-12);
}

TEST(Cosine, DegenerateAndShapeErrors) {
    const std::vector<double> z{0, 0}, x{1, 0}, three{1, 2, 3};
    EXPECT_ERROR_KIND(cosine(z, x), ErrorKind::degenerate_vector);
    EXPECT_ERROR_KIND(cosine(x, three), ErrorKind::shape);
}

TEST(WordToSentence, SelfMatchAndClampFloor) {
    Matrix s = Matrix::from_rows({{1, 0, 0}, {0, 1, 0}});
    const std::vector<double> w{0, 1, 0};
    EXPECT_NEAR(*word_to_sentence_sim(w, dense(s)), 1.0, 1e-15);
    const std::vector<double> orth{0, 0, 1};
    EXPECT_EQ(*word_to_sentence_sim(orth, dense(s)), 0.0);
    const std::vector<double> neg{-1, -1, 0};
    EXPECT_EQ(*word_to_sentence_sim(neg, dense(s)), 0.0);
    EXPECT_LT(*word_to_sentence_sim(neg, dense(s), {.clamp_negative = false}), 0.0);
}

TEST(WordToSentence, OovRowsExcluded) {
    SentenceMatrix s = dense(Matrix::from_rows({{1, 0}, {0, 1}}));
    s.oov[1] = true;
    const std::vector<double> w{0, 1};
    EXPECT_EQ(*word_to_sentence_sim(w, s), 0.0);
    s.oov[0] = true;
    EXPECT_FALSE(word_to_sentence_sim(w, s).has_value());
}

TEST(WordToSentence, MatchesNestedLoopOracle) {
    Rng rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const auto w = testutil::random_vector(rng, 4);
        const Matrix s = testutil::random_matrix(rng, 5, 4);
        EXPECT_NEAR(*word_to_sentence_sim(w, dense(s)), oracle::word_to_sentence(w, testutil::to_rows(s)), 1e-12);
    }
}

TEST(DirectedSentence, Examples) {
    Rng rng(22);
    const Matrix s = testutil::random_matrix(rng, 4, 3);
    EXPECT_NEAR(*directed_sentence_sim(dense(s), dense(s)), 1.0, 1e-12);

    const Matrix one = testutil::random_matrix(rng, 1, 3);
    EXPECT_EQ(*directed_sentence_sim(dense(one), dense(s)), *word_to_sentence_sim(one.row(0), dense(s)));

    for (int trial = 0; trial < 200; ++trial) {
        const Matrix l = testutil::random_matrix(rng, 3, 4), r = testutil::random_matrix(rng, 5, 4);
        EXPECT_NEAR(*directed_sentence_sim(dense(l), dense(r)),
                    oracle::directed(testutil::to_rows(l), testutil::to_rows(r)), 1e-12);
    }
}

TEST(DirectedSentence, DivisorCountsOnlyUsableRows) {
    SentenceMatrix l = dense(Matrix::from_rows({{1, 0}, {0, 1}, {5, 5}}));
    l.oov[2] = true;
    SentenceMatrix r = dense(Matrix::from_rows({{1, 0}}));
    EXPECT_NEAR(*directed_sentence_sim(l, r), 0.5, 1e-15);
}

TEST(LexicalSimilarity, ExamplesAndAllOov) {
    Rng rng(23);
    const Matrix s = testutil::random_matrix(rng, 4, 3);
    auto same = lexical_similarity(dense(s), dense(s));
    ASSERT_TRUE(same);
    EXPECT_NEAR(same->value, 1.0, 1e-12);
    EXPECT_EQ(same->coverage_left, 1.0);

    const Matrix l = testutil::random_matrix(rng, 3, 3), r = testutil::random_matrix(rng, 6, 3);
    auto lr = lexical_similarity(dense(l), dense(r));
    auto rl = lexical_similarity(dense(r), dense(l));
    EXPECT_EQ(lr->value, rl->value);
    EXPECT_NEAR(lr->value, oracle::lexical(testutil::to_rows(l), testutil::to_rows(r)), 1e-12);

    SentenceMatrix none = dense(l);
    none.oov.assign(3, true);
    EXPECT_FALSE(lexical_similarity(none, dense(r)).has_value());
    EXPECT_FALSE(lexical_similarity(dense(r), none).has_value());
}

TEST(LexicalSimilarity, ZeroNormEmbeddingIsAnError) {
    const Matrix l = Matrix::from_rows({{0, 0}});
    const Matrix r = Matrix::from_rows({{1, 0}});
    EXPECT_ERROR_KIND(lexical_similarity(dense(l), dense(r)), ErrorKind::degenerate_vector);
}

// Randomized invariants, 1000+ cases each.

TEST(LexsimProperty, SymmetricBitwise) {
    Rng rng(100);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t e = 1 + rng.below(8);
        auto l = random_sentence(rng, 8, e), r = random_sentence(rng, 8, e);
        ASSERT_EQ(lexical_similarity(l, r)->value, lexical_similarity(r, l)->value);
    }
}

TEST(LexsimProperty, SelfSimilarityIsOne) {
    Rng rng(101);
    for (int trial = 0; trial < 1000; ++trial) {
        auto s = random_sentence(rng);
        ASSERT_NEAR(lexical_similarity(s, s)->value, 1.0, 1e-12);
    }
}

TEST(LexsimProperty, BoundedInUnitInterval) {
    Rng rng(102);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t e = 1 + rng.below(8);
        auto l = random_sentence(rng, 8, e), r = random_sentence(rng, 8, e);
        const double v = lexical_similarity(l, r)->value;
        ASSERT_GE(v, 0.0);
        ASSERT_LE(v, 1.0);
    }
}

TEST(LexsimProperty, ScaleInvariant) {
    Rng rng(103);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t e = 1 + rng.below(8);
        auto l = random_sentence(rng, 8, e), r = random_sentence(rng, 8, e);
        const double c = std::exp(rng.uniform(-5, 5));
        auto ls = l, rs = r;
        for (double& x : ls.rows.data) x *= c;
        for (double& x : rs.rows.data) x *= c;
        ASSERT_NEAR(lexical_similarity(l, r)->value, lexical_similarity(ls, rs)->value, 1e-12);
    }
}

TEST(LexsimProperty, DuplicatingARowLeavesDirectedUnchanged) {
    Rng rng(104);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t e = 1 + rng.below(8);
        auto l = random_sentence(rng, 8, e), r = random_sentence(rng, 7, e);
        std::vector<Vector> rows;
        for (std::size_t i = 0; i < r.length(); ++i) rows.emplace_back(r.rows.row(i).begin(), r.rows.row(i).end());
        rows.push_back(rows[rng.below(rows.size())]);
        auto r2 = dense(Matrix::from_rows(rows));
        ASSERT_EQ(*directed_sentence_sim(l, r), *directed_sentence_sim(l, r2));
    }
}

TEST(LexsimProperty, MatchesBruteForceOracle) {
    Rng rng(105);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t e = 1 + rng.below(8);
        auto l = random_sentence(rng, 8, e), r = random_sentence(rng, 8, e);
        const bool clamp = rng.below(2) == 0;
        const auto ol = testutil::to_rows(l.rows), orr = testutil::to_rows(r.rows);
        ASSERT_NEAR(*directed_sentence_sim(l, r, {clamp}), oracle::directed(ol, orr, clamp), 1e-12);
        ASSERT_NEAR(lexical_similarity(l, r, {clamp})->value, oracle::lexical(ol, orr, clamp), 1e-12);
    }
}
