#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace scilink::util {

std::string trim(std::string_view s);
std::string to_upper(std::string_view s);
std::string to_lower(std::string_view s);

// Lowercase, ASCII-fold (Latin-1 accents), strip punctuation, collapse spaces.
std::string fold_text(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);

// Whitespace tokenization of fold_text(s).
std::vector<std::string> tokenize(std::string_view s);

// True iff `word` occurs in `text` delimited by non-alphanumeric characters.
// Case-sensitive; `word` may contain spaces (matched literally).
bool contains_word(std::string_view text, std::string_view word);

std::optional<long> parse_int(std::string_view s);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

// Tab-separated rows; blank lines and '#' comment lines skipped.
std::vector<std::vector<std::string>> read_tsv(const std::string& path);

// FNV-1a 64-bit, hex-encoded. Used for manifest digests.
std::string fnv1a64_hex(std::string_view data);

// Fixed-point decimal formatting, locale-independent.
std::string format_fixed(double v, int decimals);

}  // namespace scilink::util
