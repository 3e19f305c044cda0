#include "flowaudit/digest.hpp"

#include <array>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <vector>

namespace flowaudit {
namespace {

std::string to_hex(const uint8_t* bytes, size_t n) {
    static const char* digits = "0123456789abcdef";
    std::string out(n * 2, '0');
    for (size_t i = 0; i < n; ++i) {
        out[2 * i] = digits[bytes[i] >> 4];
        out[2 * i + 1] = digits[bytes[i] & 0x0f];
    }
    return out;
}

uint32_t rotl32(uint32_t x, int c) {
    return (x << c) | (x >> (32 - c));
}

// RFC 1321
struct Md5 {
    uint32_t h[4] = {0x67452301u, 0xefcdab89u, 0x98badcfeu, 0x10325476u};

    static constexpr std::array<uint32_t, 64> K = {
        0xd76aa478u, 0xe8c7b756u, 0x242070dbu, 0xc1bdceeeu, 0xf57c0fafu, 0x4787c62au,
        0xa8304613u, 0xfd469501u, 0x698098d8u, 0x8b44f7afu, 0xffff5bb1u, 0x895cd7beu,
        0x6b901122u, 0xfd987193u, 0xa679438eu, 0x49b40821u, 0xf61e2562u, 0xc040b340u,
        0x265e5a51u, 0xe9b6c7aau, 0xd62f105du, 0x02441453u, 0xd8a1e681u, 0xe7d3fbc8u,
        0x21e1cde6u, 0xc33707d6u, 0xf4d50d87u, 0x455a14edu, 0xa9e3e905u, 0xfcefa3f8u,
        0x676f02d9u, 0x8d2a4c8au, 0xfffa3942u, 0x8771f681u, 0x6d9d6122u, 0xfde5380cu,
        0xa4beea44u, 0x4bdecfa9u, 0xf6bb4b60u, 0xbebfbc70u, 0x289b7ec6u, 0xeaa127fau,
        0xd4ef3085u, 0x04881d05u, 0xd9d4d039u, 0xe6db99e5u, 0x1fa27cf8u, 0xc4ac5665u,
        0xf4292244u, 0x432aff97u, 0xab9423a7u, 0xfc93a039u, 0x655b59c3u, 0x8f0ccc92u,
        0xffeff47du, 0x85845dd1u, 0x6fa87e4fu, 0xfe2ce6e0u, 0xa3014314u, 0x4e0811a1u,
        0xf7537e82u, 0xbd3af235u, 0x2ad7d2bbu, 0xeb86d391u};

    static constexpr std::array<int, 64> S = {
        7, 12, 17, 22, 7, 12, 17, 22, 7, 12, 17, 22, 7, 12, 17, 22,
        5, 9,  14, 20, 5, 9,  14, 20, 5, 9,  14, 20, 5, 9,  14, 20,
        4, 11, 16, 23, 4, 11, 16, 23, 4, 11, 16, 23, 4, 11, 16, 23,
        6, 10, 15, 21, 6, 10, 15, 21, 6, 10, 15, 21, 6, 10, 15, 21};

    void block(const uint8_t* p) {
        uint32_t m[16];
        for (int i = 0; i < 16; ++i)
            m[i] = static_cast<uint32_t>(p[4 * i]) | (static_cast<uint32_t>(p[4 * i + 1]) << 8) |
                   (static_cast<uint32_t>(p[4 * i + 2]) << 16) |
                   (static_cast<uint32_t>(p[4 * i + 3]) << 24);
        uint32_t a = h[0], b = h[1], c = h[2], d = h[3];
        for (int i = 0; i < 64; ++i) {
            uint32_t f;
            int g;
            if (i < 16) {
                f = (b & c) | (~b & d);
                g = i;
            } else if (i < 32) {
                f = (d & b) | (~d & c);
                g = (5 * i + 1) % 16;
            } else if (i < 48) {
                f = b ^ c ^ d;
                g = (3 * i + 5) % 16;
            } else {
                f = c ^ (b | ~d);
                g = (7 * i) % 16;
            }
            uint32_t tmp = d;
            d = c;
            c = b;
            b = b + rotl32(a + f + K[i] + m[g], S[i]);
            a = tmp;
        }
        h[0] += a;
        h[1] += b;
        h[2] += c;
        h[3] += d;
    }

    std::string digest(std::string_view data) {
        uint64_t bitlen = static_cast<uint64_t>(data.size()) * 8;
        size_t full = data.size() / 64;
        const uint8_t* bytes = reinterpret_cast<const uint8_t*>(data.data());
        for (size_t i = 0; i < full; ++i)
            block(bytes + 64 * i);

        std::vector<uint8_t> tail(data.begin() + static_cast<ptrdiff_t>(full * 64), data.end());
        tail.push_back(0x80);
        while (tail.size() % 64 != 56)
            tail.push_back(0);
        for (int i = 0; i < 8; ++i)
            tail.push_back(static_cast<uint8_t>(bitlen >> (8 * i)));
        for (size_t i = 0; i < tail.size(); i += 64)
            block(tail.data() + i);

        uint8_t out[16];
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                out[4 * i + j] = static_cast<uint8_t>(h[i] >> (8 * j));
        return to_hex(out, 16);
    }
};

// FIPS 180-1
struct Sha1 {
    uint32_t h[5] = {0x67452301u, 0xefcdab89u, 0x98badcfeu, 0x10325476u, 0xc3d2e1f0u};

    void block(const uint8_t* p) {
        uint32_t w[80];
        for (int i = 0; i < 16; ++i)
            w[i] = (static_cast<uint32_t>(p[4 * i]) << 24) |
                   (static_cast<uint32_t>(p[4 * i + 1]) << 16) |
                   (static_cast<uint32_t>(p[4 * i + 2]) << 8) |
                   static_cast<uint32_t>(p[4 * i + 3]);
        for (int i = 16; i < 80; ++i)
            w[i] = rotl32(w[i - 3] ^ w[i - 8] ^ w[i - 14] ^ w[i - 16], 1);
        uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4];
        for (int i = 0; i < 80; ++i) {
            uint32_t f, k;
            if (i < 20) {
                f = (b & c) | (~b & d);
                k = 0x5a827999u;
            } else if (i < 40) {
                f = b ^ c ^ d;
                k = 0x6ed9eba1u;
            } else if (i < 60) {
                f = (b & c) | (b & d) | (c & d);
                k = 0x8f1bbcdcu;
            } else {
                f = b ^ c ^ d;
                k = 0xca62c1d6u;
            }
            uint32_t tmp = rotl32(a, 5) + f + e + k + w[i];
            e = d;
            d = c;
            c = rotl32(b, 30);
            b = a;
            a = tmp;
        }
        h[0] += a;
        h[1] += b;
        h[2] += c;
        h[3] += d;
        h[4] += e;
    }

    std::string digest(std::string_view data) {
        uint64_t bitlen = static_cast<uint64_t>(data.size()) * 8;
        size_t full = data.size() / 64;
        const uint8_t* bytes = reinterpret_cast<const uint8_t*>(data.data());
        for (size_t i = 0; i < full; ++i)
            block(bytes + 64 * i);

        std::vector<uint8_t> tail(data.begin() + static_cast<ptrdiff_t>(full * 64), data.end());
        tail.push_back(0x80);
        while (tail.size() % 64 != 56)
            tail.push_back(0);
        for (int i = 7; i >= 0; --i)
            tail.push_back(static_cast<uint8_t>(bitlen >> (8 * i)));
        for (size_t i = 0; i < tail.size(); i += 64)
            block(tail.data() + i);

        uint8_t out[20];
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 4; ++j)
                out[4 * i + j] = static_cast<uint8_t>(h[i] >> (24 - 8 * j));
        return to_hex(out, 20);
    }
};

} // namespace

std::string md5_hex(std::string_view data) {
    return Md5{}.digest(data);
}

std::string sha1_hex(std::string_view data) {
    return Sha1{}.digest(data);
}

std::set<std::string> hash_variants(std::string_view value) {
    if (value.empty())
        throw std::invalid_argument("hash_variants: empty value");
    return {std::string(value), md5_hex(value), sha1_hex(value)};
}

} // namespace flowaudit
