#pragma once

#include <string>
#include <vector>

namespace aim::text {

// ASCII lowering; bytes >= 0x80 pass through untouched.
std::string lowercase(const std::string& s);

// Deterministic tokenizer: lowercases, splits on whitespace and punctuation
// boundaries, keeps each punctuation character as its own token. UTF-8
// multibyte sequences count as word characters.
std::vector<std::string> tokenize(const std::string& s);

// Sentence boundaries at runs of terminal punctuation (. ! ?) and at blank
// lines. Terminal punctuation stays with its sentence.
std::vector<std::string> split_sentences(const std::string& s);

} // namespace aim::text
