#include "flowaudit/sigscan.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <cstring>

using nlohmann::json;

namespace flowaudit {
namespace {

std::string hex_string(const uint8_t* data, size_t n) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(n * 2);
    for (size_t i = 0; i < n; ++i) {
        out.push_back(digits[data[i] >> 4]);
        out.push_back(digits[data[i] & 0x0f]);
    }
    return out;
}

std::vector<uint8_t> from_hex(const std::string& hex) {
    std::vector<uint8_t> out;
    std::string clean;
    for (char c : hex)
        if (!std::isspace(static_cast<unsigned char>(c)))
            clean.push_back(c);
    if (clean.size() % 2 != 0)
        throw std::invalid_argument("odd-length hex string");
    for (size_t i = 0; i < clean.size(); i += 2)
        out.push_back(static_cast<uint8_t>(std::stoul(clean.substr(i, 2), nullptr, 16)));
    return out;
}

} // namespace

std::string SignatureSpec::to_json() const {
    json j;
    j["preamble"] = hex_string(preamble.data(), preamble.size());
    j["prefix"] = hex_string(prefix.data(), prefix.size());
    j["label"] = label;
    return j.dump();
}

SignatureSpec SignatureSpec::from_json(const std::string& text) {
    json j = json::parse(text);
    SignatureSpec sig;
    auto pre = from_hex(j.at("preamble").get<std::string>());
    auto pfx = from_hex(j.at("prefix").get<std::string>());
    if (pre.size() != sig.preamble.size() || pfx.size() != sig.prefix.size())
        throw std::invalid_argument("signature must be 4 preamble + 16 prefix bytes");
    std::copy(pre.begin(), pre.end(), sig.preamble.begin());
    std::copy(pfx.begin(), pfx.end(), sig.prefix.begin());
    sig.label = j.value("label", "");
    return sig;
}

SignatureSpec extract_signature(std::string_view reference_blob, uint64_t function_offset,
                                const std::string& label) {
    SignatureSpec sig;
    sig.label = label;
    if (function_offset < sig.preamble.size() ||
        function_offset + sig.prefix.size() > reference_blob.size())
        throw OutOfRange("function offset leaves no room for the signature window");
    std::memcpy(sig.preamble.data(), reference_blob.data() + function_offset - 4, 4);
    std::memcpy(sig.prefix.data(), reference_blob.data() + function_offset, 16);
    return sig;
}

std::vector<ScanHit> locate(std::string_view stripped_blob, const SignatureSpec& sig) {
    return locate_in_ranges(stripped_blob, sig, {{0, stripped_blob.size()}});
}

std::vector<ScanHit> locate_in_ranges(std::string_view blob, const SignatureSpec& sig,
                                      const std::vector<std::pair<uint64_t, uint64_t>>& ranges) {
    std::vector<ScanHit> hits;
    uint8_t window[20];
    std::memcpy(window, sig.preamble.data(), 4);
    std::memcpy(window + 4, sig.prefix.data(), 16);
    std::string_view needle(reinterpret_cast<const char*>(window), sizeof(window));

    for (auto [begin, end] : ranges) {
        end = std::min<uint64_t>(end, blob.size());
        if (begin >= end || end - begin < needle.size())
            continue;
        std::string_view hay = blob.substr(begin, end - begin);
        size_t pos = 0;
        while ((pos = hay.find(needle, pos)) != std::string_view::npos) {
            ScanHit hit;
            hit.offset = begin + pos + 4; // function start, after the preamble
            uint64_t ctx_begin = hit.offset >= 12 ? hit.offset - 12 : 0;
            uint64_t ctx_end = std::min<uint64_t>(blob.size(), hit.offset + 16 + 8);
            hit.context.assign(blob.begin() + static_cast<ptrdiff_t>(ctx_begin),
                               blob.begin() + static_cast<ptrdiff_t>(ctx_end));
            hits.push_back(std::move(hit));
            ++pos;
        }
    }
    std::sort(hits.begin(), hits.end(),
              [](const ScanHit& a, const ScanHit& b) { return a.offset < b.offset; });
    hits.erase(std::unique(hits.begin(), hits.end(),
                           [](const ScanHit& a, const ScanHit& b) { return a.offset == b.offset; }),
               hits.end());
    return hits;
}

std::vector<std::pair<uint64_t, uint64_t>> elf_executable_ranges(std::string_view blob) {
    std::vector<std::pair<uint64_t, uint64_t>> ranges;
    if (blob.size() < 64 || blob.substr(0, 4) != "\x7f" "ELF")
        return ranges;
    bool is64 = static_cast<uint8_t>(blob[4]) == 2;
    if (!is64)
        return ranges; // 32-bit objects are out of scope here
    auto u16 = [&](size_t at) {
        uint16_t v;
        std::memcpy(&v, blob.data() + at, 2);
        return v;
    };
    auto u32 = [&](size_t at) {
        uint32_t v;
        std::memcpy(&v, blob.data() + at, 4);
        return v;
    };
    auto u64 = [&](size_t at) {
        uint64_t v;
        std::memcpy(&v, blob.data() + at, 8);
        return v;
    };
    uint64_t phoff = u64(0x20);
    uint16_t phentsize = u16(0x36);
    uint16_t phnum = u16(0x38);
    for (uint16_t i = 0; i < phnum; ++i) {
        uint64_t at = phoff + static_cast<uint64_t>(i) * phentsize;
        if (at + 56 > blob.size())
            break;
        uint32_t type = u32(at);
        uint32_t flags = u32(at + 4);
        if (type != 1 /*PT_LOAD*/ || !(flags & 1 /*PF_X*/))
            continue;
        uint64_t offset = u64(at + 8);
        uint64_t filesz = u64(at + 32);
        ranges.emplace_back(offset, offset + filesz);
    }
    return ranges;
}

} // namespace flowaudit
