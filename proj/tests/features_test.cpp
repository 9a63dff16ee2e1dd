#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "aim/features.hpp"
#include "aim/tokenize.hpp"

using namespace aim;
using namespace aim::features;

namespace {

corpus::Vocabulary vocab_of(const std::vector<std::string>& tokens) {
    corpus::Vocabulary v;
    for (const std::string& t : tokens) {
        if (!v.contains(t)) {
            v.index[t] = v.tokens.size();
            v.tokens.push_back(t);
        }
    }
    return v;
}

std::vector<std::vector<std::string>> fixture_docs() {
    return {
        text::tokenize("the cat sat on the mat"),
        text::tokenize("the dog sat"),
        text::tokenize("a cat and a dog"),
    };
}

double value_of(const TfidfModel& m, const SparseVector& v, const std::string& g) {
    auto it = m.index.find(g);
    REQUIRE(it != m.index.end());
    for (const auto& [i, x] : v.entries) {
        if (i == it->second) return x;
    }
    return 0.0;
}

} // namespace

TEST_SUITE("features") {

TEST_CASE("ngram extraction") {
    auto g = extract_ngrams({"a", "b", "c"});
    CHECK(g == std::vector<std::string>{"a", "b", "c", "a_b", "b_c", "a_b_c"});
    CHECK(extract_ngrams({"only"}) == std::vector<std::string>{"only"});
    CHECK(extract_ngrams({}).empty());
}

TEST_CASE("single-document corpus gives one shared idf") {
    TfidfModel m = fit_tfidf({text::tokenize("alpha beta alpha")});
    REQUIRE(m.dim() > 0);
    for (double idf : m.idf) CHECK(idf == m.idf[0]);
    CHECK(m.index.count("gamma") == 0);  // absent n-gram -> no column
}

TEST_CASE("fixture corpus matches the hand-computed oracle to 1e-12") {
    // frozen from an independent computation of the documented formula:
    // idf = ln((1+N)/(1+df)) + 1, value = tf*idf, then L2 normalization
    TfidfModel m = fit_tfidf(fixture_docs());
    CHECK(m.dim() == 27);
    CHECK(m.idf[m.index.at("the")] == doctest::Approx(1.2876820724517808).epsilon(1e-14));
    CHECK(m.idf[m.index.at("cat")] == doctest::Approx(1.2876820724517808).epsilon(1e-14));
    CHECK(m.idf[m.index.at("the_cat")] == doctest::Approx(1.6931471805599454).epsilon(1e-14));

    SparseVector v0 = transform_tfidf(m, fixture_docs()[0]);
    CHECK(std::fabs(value_of(m, v0, "the") - 0.39985608928647065) < 1e-12);
    CHECK(std::fabs(value_of(m, v0, "cat") - 0.19992804464323533) < 1e-12);
    CHECK(std::fabs(value_of(m, v0, "cat_sat") - 0.26288135273796998) < 1e-12);
    CHECK(std::fabs(value_of(m, v0, "mat") - 0.26288135273796998) < 1e-12);
    CHECK(std::fabs(value_of(m, v0, "on_the_mat") - 0.26288135273796998) < 1e-12);
}

TEST_CASE("transform properties: zero vector, unit norm, count-scale invariance") {
    TfidfModel m = fit_tfidf(fixture_docs());
    CHECK(transform_tfidf(m, text::tokenize("completely unseen words")).entries.empty());

    for (const auto& doc : fixture_docs()) {
        CHECK(transform_tfidf(m, doc).norm() == doctest::Approx(1.0).epsilon(1e-12));
    }

    // doubling every count leaves the normalized vector unchanged; seam
    // n-grams of the repetition are not in the model and are ignored
    std::vector<std::string> doc = text::tokenize("the cat sat");
    std::vector<std::string> doubled = doc;
    doubled.insert(doubled.end(), doc.begin(), doc.end());
    SparseVector a = transform_tfidf(m, doc);
    SparseVector b = transform_tfidf(m, doubled);
    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        CHECK(a.entries[i].first == b.entries[i].first);
        CHECK(a.entries[i].second == doctest::Approx(b.entries[i].second).epsilon(1e-12));
    }
}

TEST_CASE("fit respects the top-k property with lexicographic ties") {
    std::vector<std::vector<std::string>> docs = {
        {"z", "z", "z", "m", "m", "q"},
    };
    TfidfModel m = fit_tfidf(docs, 3);
    REQUIRE(m.dim() == 3);
    CHECK(m.ngrams[0] == "z");
    CHECK(m.ngrams[1] == "m");
    // count-1 candidates: q, m_m(no: m m appears once as bigram m_m)...
    // lexicographically smallest of the remaining count-tied group wins
    TfidfModel full = fit_tfidf(docs, 1000);
    std::size_t kept_min_tf = 2;  // z=3, m=2 kept
    (void)kept_min_tf;
    CHECK(full.dim() > 3);
}

TEST_CASE("vectorizer round-trips through its file format") {
    TfidfModel m = fit_tfidf(fixture_docs());
    auto path = (std::filesystem::temp_directory_path() / "aim_tfidf_test.txt").string();
    save_tfidf(m, path);
    TfidfModel l = load_tfidf(path);
    std::filesystem::remove(path);
    CHECK(l.ngrams == m.ngrams);
    CHECK(l.df == m.df);
    CHECK(l.idf == m.idf);  // hexfloat round trip is bit-exact
    CHECK(l.n_docs == m.n_docs);
}

TEST_CASE("word overlap: set arithmetic and conventions") {
    auto vocab = vocab_of({"a", "b", "c", "d", "k1", "k2", "k3"});
    WordOverlapFeatures f = word_overlap({"a", "b", "c"}, {"b", "c", "d"}, vocab);
    CHECK(f.intersection == 2.0);
    CHECK(f.frac_comment == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(f.frac_oh == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(f.jaccard == 0.5);

    WordOverlapFeatures disjoint = word_overlap({"a"}, {"b"}, vocab);
    CHECK(disjoint.as_array() == std::array<double, 4>{0, 0, 0, 0});

    WordOverlapFeatures same = word_overlap({"k1", "k2", "k3"}, {"k3", "k2", "k1"}, vocab);
    CHECK(same.as_array() == std::array<double, 4>{3, 1, 1, 1});

    // duplicates collapse (sets of types, not tokens)
    WordOverlapFeatures dup = word_overlap({"a", "a", "a"}, {"a"}, vocab);
    CHECK(dup.as_array() == std::array<double, 4>{1, 1, 1, 1});

    // out-of-vocabulary tokens are invisible
    WordOverlapFeatures oov = word_overlap({"a", "zzz"}, {"a", "yyy"}, vocab);
    CHECK(oov.as_array() == std::array<double, 4>{1, 1, 1, 1});

    // empty sets
    WordOverlapFeatures empty = word_overlap({}, {}, vocab);
    CHECK(empty.as_array() == std::array<double, 4>{0, 0, 0, 0});
}

TEST_CASE("word overlap symmetry: components 1 and 4 agree, 2 and 3 swap") {
    auto vocab = vocab_of({"a", "b", "c", "d", "e"});
    std::vector<std::string> c{"a", "b", "c"};
    std::vector<std::string> o{"b", "c", "d", "e"};
    WordOverlapFeatures f = word_overlap(c, o, vocab);
    WordOverlapFeatures g = word_overlap(o, c, vocab);
    CHECK(f.intersection == g.intersection);
    CHECK(f.jaccard == g.jaccard);
    CHECK(f.frac_comment == g.frac_oh);
    CHECK(f.frac_oh == g.frac_comment);
}

} // TEST_SUITE
