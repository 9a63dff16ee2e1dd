#include "aim/tokenize.hpp"

#include <cctype>

namespace aim::text {

std::string lowercase(const std::string& s) {
    std::string out = s;
    for (char& c : out) {
        unsigned char u = static_cast<unsigned char>(c);
        if (u < 0x80) c = char(std::tolower(u));
    }
    return out;
}

namespace {

enum class CharClass { space, word, punct };

CharClass classify(unsigned char c) {
    if (c >= 0x80) return CharClass::word;  // inside a UTF-8 sequence
    if (std::isspace(c)) return CharClass::space;
    if (std::isalnum(c)) return CharClass::word;
    return CharClass::punct;
}

} // namespace

std::vector<std::string> tokenize(const std::string& s) {
    std::string lower = lowercase(s);
    std::vector<std::string> tokens;
    std::string current;
    for (unsigned char c : lower) {
        switch (classify(c)) {
            case CharClass::space:
                if (!current.empty()) {
                    tokens.push_back(current);
                    current.clear();
                }
                break;
            case CharClass::word:
                current.push_back(char(c));
                break;
            case CharClass::punct:
                if (!current.empty()) {
                    tokens.push_back(current);
                    current.clear();
                }
                tokens.push_back(std::string(1, char(c)));
                break;
        }
    }
    if (!current.empty()) tokens.push_back(current);
    return tokens;
}

namespace {

bool is_terminal(char c) { return c == '.' || c == '!' || c == '?'; }

bool blank_line_at(const std::string& s, std::size_t i) {
    // newline followed by optional horizontal space and another newline
    if (s[i] != '\n') return false;
    std::size_t j = i + 1;
    while (j < s.size() && (s[j] == ' ' || s[j] == '\t' || s[j] == '\r')) ++j;
    return j < s.size() && s[j] == '\n';
}

std::string trimmed(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

} // namespace

std::vector<std::string> split_sentences(const std::string& s) {
    std::vector<std::string> sentences;
    std::string current;
    std::size_t i = 0;
    auto flush = [&]() {
        std::string t = trimmed(current);
        if (!t.empty()) sentences.push_back(t);
        current.clear();
    };
    while (i < s.size()) {
        char c = s[i];
        if (is_terminal(c)) {
            while (i < s.size() && is_terminal(s[i])) {
                current.push_back(s[i]);
                ++i;
            }
            flush();
            continue;
        }
        if (blank_line_at(s, i)) {
            flush();
            while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
            continue;
        }
        current.push_back(c == '\n' ? ' ' : c);
        ++i;
    }
    flush();
    return sentences;
}

} // namespace aim::text
