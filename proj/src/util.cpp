#include "scilink/util.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace scilink::util {

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string to_upper(std::string_view s) {
    std::string r(s);
    for (char& c : r) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return r;
}

std::string to_lower(std::string_view s) {
    std::string r(s);
    for (char& c : r) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return r;
}

namespace {

// Maps the Latin-1 supplement (UTF-8 two-byte range) onto plain ASCII letters.
char fold_latin1(unsigned char second) {
    if (second >= 0x80 && second <= 0x85) return 'a';
    if (second == 0x87) return 'c';
    if (second >= 0x88 && second <= 0x8B) return 'e';
    if (second >= 0x8C && second <= 0x8F) return 'i';
    if (second == 0x91) return 'n';
    if (second >= 0x92 && second <= 0x96) return 'o';
    if (second == 0x98) return 'o';
    if (second >= 0x99 && second <= 0x9C) return 'u';
    if (second == 0x9F) return 'y';
    if (second >= 0xA0 && second <= 0xA5) return 'a';
    if (second == 0xA7) return 'c';
    if (second >= 0xA8 && second <= 0xAB) return 'e';
    if (second >= 0xAC && second <= 0xAF) return 'i';
    if (second == 0xB1) return 'n';
    if (second >= 0xB2 && second <= 0xB6) return 'o';
    if (second == 0xB8) return 'o';
    if (second >= 0xB9 && second <= 0xBC) return 'u';
    if (second == 0xBD || second == 0xBF) return 'y';
    return 0;
}

}  // namespace

std::string fold_text(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool pending_space = false;
    for (size_t i = 0; i < s.size(); ++i) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        char mapped = 0;
        if ((c == 0xC3) && i + 1 < s.size()) {
            mapped = fold_latin1(static_cast<unsigned char>(s[i + 1]) | 0x80u);
            if (mapped) { ++i; }
        }
        if (!mapped) {
            if (std::isalnum(c)) mapped = static_cast<char>(std::tolower(c));
        }
        if (mapped) {
            if (pending_space && !out.empty()) out.push_back(' ');
            pending_space = false;
            out.push_back(mapped);
        } else {
            pending_space = true;
        }
    }
    return out;
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    for (size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.emplace_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

std::vector<std::string> tokenize(std::string_view s) {
    std::vector<std::string> out;
    std::string folded = fold_text(s);
    std::istringstream iss(folded);
    std::string tok;
    while (iss >> tok) out.push_back(tok);
    return out;
}

bool contains_word(std::string_view text, std::string_view word) {
    if (word.empty()) return false;
    size_t pos = 0;
    while ((pos = text.find(word, pos)) != std::string_view::npos) {
        bool left_ok = pos == 0 ||
            !std::isalnum(static_cast<unsigned char>(text[pos - 1]));
        size_t end = pos + word.size();
        bool right_ok = end == text.size() ||
            !std::isalnum(static_cast<unsigned char>(text[end]));
        if (left_ok && right_ok) return true;
        ++pos;
    }
    return false;
}

std::optional<long> parse_int(std::string_view s) {
    std::string t = trim(s);
    long value = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size()) return std::nullopt;
    return value;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

std::vector<std::vector<std::string>> read_tsv(const std::string& path) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(read_file(path));
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto fields = split(line, '\t');
        for (auto& f : fields) f = trim(f);
        rows.push_back(std::move(fields));
    }
    return rows;
}

std::string fnv1a64_hex(std::string_view data) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

}  // namespace scilink::util
