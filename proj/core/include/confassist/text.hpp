#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace confassist {

// Splits an utterance into lowercase word tokens. Letters and digits (any
// script) form tokens; apostrophes inside a word are dropped ("conference's"
// becomes "conferences"); every other punctuation or whitespace character
// separates tokens. Invalid UTF-8 bytes are treated as separators.
std::vector<std::string> tokenize(std::string_view text);

// Lowercases ASCII, Latin-1, Latin Extended-A, Greek and Cyrillic letters;
// other code points pass through unchanged.
std::string to_lower(std::string_view text);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace confassist
