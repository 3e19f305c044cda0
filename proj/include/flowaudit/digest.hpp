#pragma once

#include <set>
#include <string>
#include <string_view>

namespace flowaudit {

std::string md5_hex(std::string_view data);
std::string sha1_hex(std::string_view data);

// The value itself plus its lowercase MD5 and SHA1 hex digests.
// Precondition: value is non-empty.
std::set<std::string> hash_variants(std::string_view value);

} // namespace flowaudit
