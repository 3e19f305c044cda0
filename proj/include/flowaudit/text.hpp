#pragma once

#include <string>
#include <string_view>
#include <vector>
#include <set>

namespace flowaudit {

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);

// Splits on any character in `seps`; empty pieces are dropped.
std::vector<std::string> split(std::string_view s, std::string_view seps);

// Lowercase; runs of '-' and '_' collapse to a single '_'. Used so that
// "X--Unity--Version", "x-unity-version" and "x_unity_version" compare equal.
std::string normalize_key(std::string_view key);

// Lowercase, collapse whitespace, strip punctuation except internal hyphens.
// Canonical form for ontology terms and entity names.
std::string normalize_term(std::string_view term);

// Lowercase alphanumeric tokens; tokens of length 1 are dropped.
std::set<std::string> bag_of_words(std::string_view text);

// Sentence split on '.', '!', '?' that are not between digits.
std::vector<std::string> split_sentences(std::string_view text);

bool is_ip_literal(std::string_view host);

std::string base64_encode(std::string_view data);
std::string base64_decode(std::string_view text);

} // namespace flowaudit
