#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "aim/analysis.hpp"
#include "aim/rng.hpp"
#include "aim/tokenize.hpp"

using namespace aim;
using namespace aim::analysis;

namespace {

DiagnosticsRecord make_record(const std::string& post, const std::string& comment, int label,
                              std::vector<double> attention,
                              std::vector<std::vector<std::vector<double>>> inter = {}) {
    DiagnosticsRecord r;
    r.post_id = post;
    r.comment_id = comment;
    r.label = label;
    r.probability = 0.5;
    r.attention = std::move(attention);
    if (!inter.empty()) {
        r.interactions.m_o = inter.size();
        r.interactions.m_c = inter[0].size();
        r.interactions.dim = inter[0][0].size();
        for (auto& row : inter) {
            for (auto& cell : row) {
                for (double v : cell) r.interactions.values.push_back(v);
            }
        }
        for (std::size_t k = 0; k < r.interactions.dim; ++k) {
            r.argmax.push_back(r.interactions.argmax_dim(k));
        }
    }
    return r;
}

} // namespace

TEST_SUITE("analysis") {

TEST_CASE("uniform attention gives equal means and t = 0") {
    std::vector<DiagnosticsRecord> diags;
    std::vector<AnnotationRecord> anns;
    for (int p = 0; p < 5; ++p) {
        std::string post = "post" + std::to_string(p);
        std::string cs = "s" + std::to_string(p);
        std::string cu = "u" + std::to_string(p);
        diags.push_back(make_record(post, cs, 1, {0.25, 0.25, 0.25, 0.25}));
        diags.push_back(make_record(post, cu, 0, {0.25, 0.25, 0.25, 0.25}));
        anns.push_back({cs, 0, 1});
        anns.push_back({cu, 2, 3});
    }
    AlignmentResult res = attention_alignment(diags, anns);
    CHECK(res.n_posts == 5);
    CHECK(res.mean_successful == res.mean_unsuccessful);
    CHECK(res.ttest.t == 0.0);
    CHECK(res.ttest.p == 1.0);
}

TEST_CASE("attention concentrated on successful annotations yields positive t") {
    std::vector<DiagnosticsRecord> diags;
    std::vector<AnnotationRecord> anns;
    Rng rng(3, "conc");
    for (int p = 0; p < 8; ++p) {
        std::string post = "post" + std::to_string(p);
        std::string cs = "s" + std::to_string(p);
        std::string cu = "u" + std::to_string(p);
        double jitter = 0.01 * rng.uniform(0, 1);
        diags.push_back(make_record(post, cs, 1, {0.45 - jitter, 0.45, 0.05 + jitter, 0.05}));
        diags.push_back(make_record(post, cu, 0, {0.45 - jitter, 0.45, 0.05 + jitter, 0.05}));
        anns.push_back({cs, 0, 1});  // successful comments address the hot sentences
        anns.push_back({cu, 2, 3});
    }
    AlignmentResult res = attention_alignment(diags, anns);
    CHECK(res.mean_successful > res.mean_unsuccessful);
    CHECK(res.ttest.t > 0.0);
    CHECK(res.ttest.p < 0.05);
}

TEST_CASE("30-post fixture agrees with the shared t-test oracle") {
    std::vector<DiagnosticsRecord> diags;
    std::vector<AnnotationRecord> anns;
    std::vector<double> succ_means, unsucc_means;
    Rng rng(7, "fixture");
    for (int p = 0; p < 30; ++p) {
        std::string post = "post" + std::to_string(p);
        std::string cs = "s" + std::to_string(p);
        std::string cu = "u" + std::to_string(p);
        double a0 = rng.uniform(0.2, 0.5), a1 = rng.uniform(0.1, 0.3);
        double rest = (1.0 - a0 - a1) / 2.0;
        diags.push_back(make_record(post, cs, 1, {a0, a1, rest, rest}));
        double b0 = rng.uniform(0.1, 0.4), b1 = rng.uniform(0.05, 0.25);
        double brest = (1.0 - b0 - b1) / 2.0;
        diags.push_back(make_record(post, cu, 0, {b0, b1, brest, brest}));
        anns.push_back({cs, 0, 1});
        anns.push_back({cu, 0, 1});
        succ_means.push_back(0.5 * (a0 + a1));
        unsucc_means.push_back(0.5 * (b0 + b1));
    }
    AlignmentResult res = attention_alignment(diags, anns);
    metrics::TTestResult expect = metrics::paired_ttest(succ_means, unsucc_means);
    CHECK(res.ttest.t == doctest::Approx(expect.t).epsilon(1e-12));
    CHECK(res.ttest.p == doctest::Approx(expect.p).epsilon(1e-12));
    CHECK(res.n_posts == 30);
}

TEST_CASE("alignment errors: missing sentence, unknown comment") {
    std::vector<DiagnosticsRecord> diags = {make_record("p", "c1", 1, {0.5, 0.5})};
    CHECK_THROWS_AS(attention_alignment(diags, {{"c1", 0, 5}}), DataError);
    CHECK_THROWS_AS(attention_alignment(diags, {{"ghost", 0, 1}}), DataError);
}

TEST_CASE("interaction-topic correlation recovers a planted relation") {
    topics::LdaModel tm;
    tm.n_topics = 2;
    tm.top_words = {{"apple"}, {"rocket"}};

    corpus::LabeledPair p1, p2;
    p1.post_id = "post1";
    p1.comment_id = "c1";
    p1.oh_sentences = {"apple pie", "rocket fuel"};
    p1.comment_sentences = {"apple tart", "rocket science"};
    p2.post_id = "post1";
    p2.comment_id = "c2";
    p2.oh_sentences = {"apple pie", "rocket fuel"};
    p2.comment_sentences = {"apple orchard"};

    PairTextLookup lookup;
    lookup[{"post1", "c1"}] = &p1;
    lookup[{"post1", "c2"}] = &p2;

    // dimension 0 = the exact topic similarity, dimension 1 = constant
    auto sim = [&](const std::string& a, const std::string& b) {
        return topics::topic_similarity(tm, text::tokenize(a), text::tokenize(b));
    };
    std::vector<DiagnosticsRecord> diags;
    {
        std::vector<std::vector<std::vector<double>>> inter(2);
        for (std::size_t i = 0; i < 2; ++i) {
            for (std::size_t j = 0; j < 2; ++j) {
                inter[i].push_back({sim(p1.oh_sentences[i], p1.comment_sentences[j]), 7.0});
            }
        }
        diags.push_back(make_record("post1", "c1", 1, {0.5, 0.5}, inter));
    }
    {
        std::vector<std::vector<std::vector<double>>> inter(2);
        for (std::size_t i = 0; i < 2; ++i) {
            inter[i].push_back({sim(p2.oh_sentences[i], p2.comment_sentences[0]), 7.0});
        }
        diags.push_back(make_record("post1", "c2", 0, {0.5, 0.5}, inter));
    }

    auto corr = interaction_topic_correlation(diags, tm, lookup);
    REQUIRE(corr.size() == 2);
    CHECK(corr[0].defined);
    CHECK(corr[0].r == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(corr[1].defined);  // constant dimension reported undefined
    CHECK(corr[0].n == 6);
}

TEST_CASE("independent random dimension shows vanishing correlation") {
    topics::LdaModel tm;
    tm.n_topics = 2;
    tm.top_words = {{"apple"}, {"rocket"}};

    Rng rng(11, "indep");
    auto mixed_sentence = [&rng]() {
        std::string s;
        std::size_t words = 1 + rng.below(4);
        for (std::size_t w = 0; w < words; ++w) {
            s += rng.coin() ? "apple " : "rocket ";
        }
        return s;
    };

    // correlation of pure noise against similarity shrinks with sample count
    double small_r = 0.0, large_r = 0.0;
    for (std::size_t side : {3, 14}) {
        corpus::LabeledPair pair;
        pair.post_id = "p";
        pair.comment_id = "c";
        for (std::size_t i = 0; i < side; ++i) {
            pair.oh_sentences.push_back(mixed_sentence());
            pair.comment_sentences.push_back(mixed_sentence());
        }
        PairTextLookup lookup;
        lookup[{"p", "c"}] = &pair;

        std::vector<std::vector<std::vector<double>>> inter(side);
        for (std::size_t i = 0; i < side; ++i) {
            for (std::size_t j = 0; j < side; ++j) inter[i].push_back({rng.uniform(-1, 1)});
        }
        std::vector<double> attn(side, 1.0 / double(side));
        std::vector<DiagnosticsRecord> diags{make_record("p", "c", 1, attn, inter)};
        auto corr = interaction_topic_correlation(diags, tm, lookup);
        REQUIRE(corr.size() == 1);
        REQUIRE(corr[0].defined);
        (side == 3 ? small_r : large_r) = std::fabs(corr[0].r);
        CHECK(corr[0].n == side * side);
    }
    CHECK(large_r < 0.25);       // 196 noise samples
    CHECK(large_r < small_r);    // and shrinking with sample size
}

TEST_CASE("top interaction pairs: global order and tie-breaking") {
    std::vector<DiagnosticsRecord> diags;
    diags.push_back(make_record("postB", "c1", 0, {1.0}, {{{0.3}, {0.9}}}));
    diags.push_back(make_record("postA", "c2", 1, {1.0}, {{{0.9}, {0.1}}}));

    auto top = top_interaction_pairs(diags, 0, 10);  // n larger than pair count
    REQUIRE(top.size() == 4);
    CHECK(top[0].value == 0.9);
    CHECK(top[0].post_id == "postA");  // tie on value -> post id ascending
    CHECK(top[1].value == 0.9);
    CHECK(top[1].post_id == "postB");
    CHECK(top[3].value == 0.1);

    auto top2 = top_interaction_pairs(diags, 0, 2);
    CHECK(top2.size() == 2);
    CHECK_THROWS_AS(top_interaction_pairs(diags, 5, 2), DataError);
}

TEST_CASE("diagnostics and annotations round-trip through files") {
    auto dir = std::filesystem::temp_directory_path();
    auto dpath = (dir / "aim_diag_test.jsonl").string();
    auto apath = (dir / "aim_ann_test.txt").string();

    std::vector<DiagnosticsRecord> diags = {
        make_record("p1", "c1", 1, {0.7, 0.3}, {{{0.5, -0.25}}, {{0.125, 2.0}}}),
    };
    write_diagnostics(diags, dpath);
    auto loaded = read_diagnostics(dpath);
    REQUIRE(loaded.size() == 1);
    CHECK(loaded[0].post_id == "p1");
    CHECK(loaded[0].attention == diags[0].attention);
    CHECK(loaded[0].interactions.values == diags[0].interactions.values);
    CHECK(loaded[0].argmax == diags[0].argmax);

    std::ofstream ann(apath);
    ann << "# comment idx1 idx2\nc1 0 1\n\nc2 3 4\n";
    ann.close();
    auto anns = read_annotations(apath);
    REQUIRE(anns.size() == 2);
    CHECK(anns[0].comment_id == "c1");
    CHECK(anns[1].idx2 == 4);

    std::ofstream bad(apath);
    bad << "c3 2 2\n";
    bad.close();
    CHECK_THROWS_AS(read_annotations(apath), ParseError);

    std::filesystem::remove(dpath);
    std::filesystem::remove(apath);
}

} // TEST_SUITE
