#include "gccf/io.hpp"

#include "gccf/error.hpp"
#include "text.hpp"

#include <sstream>

namespace gccf::io {

namespace {

std::vector<std::vector<std::int64_t>> int_lines(const std::string& content) {
    std::vector<std::vector<std::int64_t>> rows;
    std::istringstream in(content);
    std::string line;
    while (std::getline(in, line)) {
        const auto body = text::strip_comment(line);
        if (!body.empty()) rows.push_back(text::parse_ints_ws(body));
    }
    return rows;
}

} // namespace

ffla::IntMatrix parse_int_matrix(const std::string& content) {
    auto rows = int_lines(content);
    if (rows.empty()) throw Error(ErrorCode::ParseError, "matrix has no rows");
    for (const auto& r : rows) {
        if (r.size() != rows[0].size()) throw Error(ErrorCode::ParseError, "matrix rows differ in length");
    }
    return rows;
}

std::vector<Vec> parse_messages(const std::string& content, ffla::Elem gamma) {
    std::vector<Vec> out;
    for (const auto& r : int_lines(content)) {
        Vec v;
        for (auto x : r) v.push_back(ffla::reduce(x, gamma));
        out.push_back(std::move(v));
    }
    return out;
}

std::string format_messages(const std::vector<Vec>& messages) {
    std::string s;
    for (const auto& m : messages) {
        for (std::size_t i = 0; i < m.size(); ++i) s += (i ? " " : "") + std::to_string(m[i]);
        s += "\n";
    }
    return s;
}

std::string format_blocks(const std::vector<CompressedWord>& words) {
    std::string s;
    for (const auto& w : words) {
        for (std::size_t i = 0; i < w.kept.size(); ++i) {
            s += std::to_string(w.receiver) + " " + std::to_string(w.kept[i]);
            for (auto v : w.blocks[i]) s += " " + std::to_string(v);
            s += "\n";
        }
    }
    return s;
}

std::vector<CompressedWord> parse_blocks(const std::string& content, std::size_t L, ffla::Elem gamma) {
    std::vector<CompressedWord> words(L);
    for (std::size_t m = 0; m < L; ++m) words[m].receiver = m + 1;
    for (const auto& r : int_lines(content)) {
        if (r.size() < 2) throw Error(ErrorCode::ParseError, "block line needs receiver and block index");
        if (r[0] < 1 || static_cast<std::size_t>(r[0]) > L || r[1] < 1) {
            throw Error(ErrorCode::ParseError, "block line index out of range");
        }
        auto& w = words[static_cast<std::size_t>(r[0]) - 1];
        const auto k = static_cast<Index>(r[1]);
        if (!w.kept.empty() && w.kept.back() >= k) {
            throw Error(ErrorCode::ParseError, "blocks of a receiver must be listed in ascending order");
        }
        Block b;
        for (std::size_t i = 2; i < r.size(); ++i) b.push_back(ffla::reduce(r[i], gamma));
        w.kept.push_back(k);
        w.blocks.push_back(std::move(b));
    }
    return words;
}

std::string read_file(const std::string& path) { return text::read_file(path); }

} // namespace gccf::io
