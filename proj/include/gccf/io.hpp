#pragma once

/**
 * @file io.hpp
 * @brief Plain-text formats used by the command-line tool.
 *
 * All formats accept blank lines and '#' comments.
 *  - matrix: one row of whitespace-separated integers per line
 *  - messages: line l holds the full message of source l
 *  - block dump: lines "m k v_1 ... v_d"
 */

#include "gccf/codeword.hpp"
#include "gccf/compress.hpp"
#include "gccf/ffla.hpp"

#include <string>
#include <vector>

namespace gccf::io {

/// Throws ParseError for ragged or empty input.
[[nodiscard]] ffla::IntMatrix parse_int_matrix(const std::string& text);
/// Entries are reduced into [0, gamma).
[[nodiscard]] std::vector<Vec> parse_messages(const std::string& text, ffla::Elem gamma);
[[nodiscard]] std::string format_messages(const std::vector<Vec>& messages);

[[nodiscard]] std::string format_blocks(const std::vector<CompressedWord>& words);
/// Groups lines by receiver 1..L; blocks of a receiver must appear in ascending k.
[[nodiscard]] std::vector<CompressedWord> parse_blocks(const std::string& text, std::size_t L, ffla::Elem gamma);

/// Reads a whole file. Throws IoError.
[[nodiscard]] std::string read_file(const std::string& path);

} // namespace gccf::io
