#include "aim/analysis.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "aim/tokenize.hpp"

namespace aim::analysis {

using nlohmann::json;

void write_diagnostics(const std::vector<DiagnosticsRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write diagnostics: " + path);
    for (const DiagnosticsRecord& r : records) {
        json j;
        j["post_id"] = r.post_id;
        j["comment_id"] = r.comment_id;
        j["label"] = r.label;
        j["p"] = r.probability;
        j["attention"] = r.attention;
        json inter = json::array();
        for (std::size_t i = 0; i < r.interactions.m_o; ++i) {
            json row = json::array();
            for (std::size_t jj = 0; jj < r.interactions.m_c; ++jj) {
                json cell = json::array();
                for (std::size_t k = 0; k < r.interactions.dim; ++k) {
                    cell.push_back(r.interactions.at(i, jj, k));
                }
                row.push_back(std::move(cell));
            }
            inter.push_back(std::move(row));
        }
        j["interactions"] = std::move(inter);
        json am = json::array();
        for (const auto& [i, jj] : r.argmax) am.push_back({i, jj});
        j["argmax"] = std::move(am);
        out << j.dump() << "\n";
    }
}

std::vector<DiagnosticsRecord> read_diagnostics(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read diagnostics: " + path);
    std::vector<DiagnosticsRecord> records;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": malformed diagnostics record");
        }
        DiagnosticsRecord r;
        try {
            r.post_id = j.at("post_id").get<std::string>();
            r.comment_id = j.at("comment_id").get<std::string>();
            r.label = j.at("label").get<int>();
            r.probability = j.at("p").get<double>();
            r.attention = j.at("attention").get<std::vector<double>>();
            const json& inter = j.at("interactions");
            r.interactions.m_o = inter.size();
            r.interactions.m_c = inter.empty() ? 0 : inter[0].size();
            r.interactions.dim =
                r.interactions.m_c == 0 ? 0 : inter[0][0].size();
            for (const json& row : inter) {
                for (const json& cell : row) {
                    for (const json& v : cell) r.interactions.values.push_back(v.get<double>());
                }
            }
            for (const json& am : j.at("argmax")) {
                r.argmax.emplace_back(am[0].get<std::size_t>(), am[1].get<std::size_t>());
            }
        } catch (const json::exception& e) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<AnnotationRecord> read_annotations(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read annotations: " + path);
    std::vector<AnnotationRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream is(line);
        AnnotationRecord a;
        if (!(is >> a.comment_id >> a.idx1 >> a.idx2)) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected 'comment_id idx1 idx2'");
        }
        if (a.idx1 == a.idx2) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": sentence indices must differ");
        }
        out.push_back(std::move(a));
    }
    return out;
}

AlignmentResult attention_alignment(const std::vector<DiagnosticsRecord>& diagnostics,
                                    const std::vector<AnnotationRecord>& annotations) {
    std::map<std::string, const DiagnosticsRecord*> by_comment;
    for (const DiagnosticsRecord& r : diagnostics) by_comment[r.comment_id] = &r;

    // per post: mean annotated attention of the first successful and first
    // unsuccessful annotated comment
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> per_post;
    for (const AnnotationRecord& a : annotations) {
        auto it = by_comment.find(a.comment_id);
        if (it == by_comment.end()) {
            throw DataError("annotation references unknown comment: " + a.comment_id);
        }
        const DiagnosticsRecord& r = *it->second;
        if (a.idx1 >= r.attention.size() || a.idx2 >= r.attention.size()) {
            throw DataError("annotation for " + a.comment_id + " references a missing sentence");
        }
        double mean_attn = 0.5 * (r.attention[a.idx1] + r.attention[a.idx2]);
        auto& slot = per_post[r.post_id];
        (r.label == 1 ? slot.first : slot.second).push_back(mean_attn);
    }

    std::vector<double> successful, unsuccessful;
    for (const auto& [post, slot] : per_post) {
        if (slot.first.empty() || slot.second.empty()) continue;  // unmatched post
        successful.push_back(slot.first.front());
        unsuccessful.push_back(slot.second.front());
    }
    if (successful.size() < 2) {
        throw DataError("attention alignment needs at least 2 matched posts");
    }

    AlignmentResult res;
    res.n_posts = successful.size();
    for (double v : successful) res.mean_successful += v;
    for (double v : unsuccessful) res.mean_unsuccessful += v;
    res.mean_successful /= double(successful.size());
    res.mean_unsuccessful /= double(unsuccessful.size());
    res.ttest = metrics::paired_ttest(successful, unsuccessful);
    return res;
}

std::vector<DimensionCorrelation> interaction_topic_correlation(
    const std::vector<DiagnosticsRecord>& diagnostics, const topics::LdaModel& topic_model,
    const PairTextLookup& pair_texts) {
    if (diagnostics.empty()) throw DataError("no diagnostics records");
    std::size_t dim = diagnostics[0].interactions.dim;

    std::vector<std::vector<double>> values(dim);
    std::vector<double> sims;
    for (const DiagnosticsRecord& r : diagnostics) {
        auto it = pair_texts.find({r.post_id, r.comment_id});
        if (it == pair_texts.end()) {
            throw DataError("no pair text for " + r.post_id + "/" + r.comment_id);
        }
        const corpus::LabeledPair& pair = *it->second;
        if (pair.oh_sentences.size() < r.interactions.m_o ||
            pair.comment_sentences.size() < r.interactions.m_c) {
            throw DataError("diagnostics shape exceeds pair sentences for " + r.comment_id);
        }
        std::vector<std::vector<std::string>> oh_tokens, c_tokens;
        for (std::size_t i = 0; i < r.interactions.m_o; ++i) {
            oh_tokens.push_back(text::tokenize(pair.oh_sentences[i]));
        }
        for (std::size_t j = 0; j < r.interactions.m_c; ++j) {
            c_tokens.push_back(text::tokenize(pair.comment_sentences[j]));
        }
        for (std::size_t i = 0; i < r.interactions.m_o; ++i) {
            for (std::size_t j = 0; j < r.interactions.m_c; ++j) {
                sims.push_back(topics::topic_similarity(topic_model, oh_tokens[i], c_tokens[j]));
                for (std::size_t k = 0; k < dim; ++k) {
                    values[k].push_back(r.interactions.at(i, j, k));
                }
            }
        }
    }

    std::vector<DimensionCorrelation> out(dim);
    for (std::size_t k = 0; k < dim; ++k) {
        out[k].n = values[k].size();
        try {
            out[k].r = metrics::pearson(values[k], sims);
            out[k].defined = true;
        } catch (const DegenerateError&) {
            out[k].defined = false;  // constant dimension (or similarity)
        }
    }
    return out;
}

std::vector<TopPair> top_interaction_pairs(const std::vector<DiagnosticsRecord>& diagnostics,
                                           std::size_t dimension, std::size_t n) {
    std::vector<TopPair> all;
    for (const DiagnosticsRecord& r : diagnostics) {
        if (dimension >= r.interactions.dim) {
            throw DataError("interaction dimension out of range for " + r.comment_id);
        }
        for (std::size_t i = 0; i < r.interactions.m_o; ++i) {
            for (std::size_t j = 0; j < r.interactions.m_c; ++j) {
                all.push_back({r.interactions.at(i, j, dimension), r.post_id, r.comment_id, i, j});
            }
        }
    }
    std::sort(all.begin(), all.end(), [](const TopPair& a, const TopPair& b) {
        if (a.value != b.value) return a.value > b.value;
        if (a.post_id != b.post_id) return a.post_id < b.post_id;
        if (a.comment_id != b.comment_id) return a.comment_id < b.comment_id;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    });
    if (all.size() > n) all.resize(n);
    return all;
}

} // namespace aim::analysis
