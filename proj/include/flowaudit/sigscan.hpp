#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace flowaudit {

struct OutOfRange : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// Function signature: the 4 bytes preceding the function start plus the
// first 16 bytes of the function itself.
struct SignatureSpec {
    std::array<uint8_t, 4> preamble{};
    std::array<uint8_t, 16> prefix{};
    std::string label;

    std::string to_json() const;
    static SignatureSpec from_json(const std::string& text);
};

struct ScanHit {
    uint64_t offset = 0;          // where the prefix (function start) begins
    std::vector<uint8_t> context; // 8 bytes either side of the 20-byte window
};

// Preamble/prefix sliced out of a symbolicated reference blob around the
// known function offset.
SignatureSpec extract_signature(std::string_view reference_blob, uint64_t function_offset,
                                const std::string& label = "");

// Every offset whose surrounding bytes equal the signature, ascending.
// Zero, one or many hits are all valid outcomes.
std::vector<ScanHit> locate(std::string_view stripped_blob, const SignatureSpec& sig);

// Offset ranges of executable PT_LOAD segments; empty when the blob is not
// ELF. Used to optionally restrict the scan.
std::vector<std::pair<uint64_t, uint64_t>> elf_executable_ranges(std::string_view blob);
std::vector<ScanHit> locate_in_ranges(std::string_view blob, const SignatureSpec& sig,
                                      const std::vector<std::pair<uint64_t, uint64_t>>& ranges);

} // namespace flowaudit
