#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tabletitle::corpus {

using Tokens = std::vector<std::string>;

// Lowercases, splits on whitespace, and emits every punctuation character as
// its own token. Hyphens and apostrophes between two word characters stay
// inside the word ("x-ray", "don't"). Non-ASCII letters count as word
// characters; common Unicode punctuation and spaces are recognised.
Tokens tokenize(std::string_view text);

std::string join(std::span<const std::string> tokens, std::string_view sep = " ");

}  // namespace tabletitle::corpus
