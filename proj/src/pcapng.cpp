#include "flowaudit/pcapng.hpp"

#include "flowaudit/text.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <ostream>
#include <sstream>

namespace flowaudit {
namespace {

constexpr uint32_t kSectionHeader = 0x0A0D0D0A;
constexpr uint32_t kInterfaceDescription = 0x00000001;
constexpr uint32_t kEnhancedPacket = 0x00000006;
constexpr uint32_t kByteOrderMagic = 0x1A2B3C4D;

constexpr uint16_t kOptEnd = 0;
constexpr uint16_t kOptComment = 1;
constexpr uint16_t kOptTsResol = 9;

constexpr uint16_t kLinkEthernet = 1;
constexpr uint16_t kLinkRaw = 101;
constexpr uint16_t kLinkIpv4 = 228;

struct Cursor {
    std::string_view data;
    size_t pos = 0;
    bool swap = false;

    bool eof() const { return pos >= data.size(); }
    size_t remaining() const { return data.size() - pos; }

    uint32_t peek_u32(size_t at) const {
        uint32_t v;
        std::memcpy(&v, data.data() + at, 4);
        if (swap)
            v = __builtin_bswap32(v);
        return v;
    }
};

uint16_t get_u16(std::string_view s, size_t at, bool swap) {
    uint16_t v;
    std::memcpy(&v, s.data() + at, 2);
    return swap ? __builtin_bswap16(v) : v;
}

uint32_t get_u32(std::string_view s, size_t at, bool swap) {
    uint32_t v;
    std::memcpy(&v, s.data() + at, 4);
    return swap ? __builtin_bswap32(v) : v;
}

uint32_t be16(std::string_view s, size_t at) {
    return (static_cast<uint8_t>(s[at]) << 8) | static_cast<uint8_t>(s[at + 1]);
}

uint32_t be32(std::string_view s, size_t at) {
    return (static_cast<uint32_t>(static_cast<uint8_t>(s[at])) << 24) |
           (static_cast<uint32_t>(static_cast<uint8_t>(s[at + 1])) << 16) |
           (static_cast<uint32_t>(static_cast<uint8_t>(s[at + 2])) << 8) |
           static_cast<uint32_t>(static_cast<uint8_t>(s[at + 3]));
}

std::string ipv4_to_string(std::string_view s, size_t at) {
    std::ostringstream os;
    os << static_cast<unsigned>(static_cast<uint8_t>(s[at])) << '.'
       << static_cast<unsigned>(static_cast<uint8_t>(s[at + 1])) << '.'
       << static_cast<unsigned>(static_cast<uint8_t>(s[at + 2])) << '.'
       << static_cast<unsigned>(static_cast<uint8_t>(s[at + 3]));
    return os.str();
}

struct OptionView {
    uint16_t code;
    std::string_view value;
};

std::vector<OptionView> parse_options(std::string_view body, size_t at, bool swap,
                                      uint64_t block_offset) {
    std::vector<OptionView> out;
    while (at + 4 <= body.size()) {
        uint16_t code = get_u16(body, at, swap);
        uint16_t len = get_u16(body, at + 2, swap);
        at += 4;
        if (code == kOptEnd)
            break;
        if (at + len > body.size())
            throw MalformedBlock(block_offset, "option overruns block");
        out.push_back({code, body.substr(at, len)});
        at += (len + 3u) & ~3u;
    }
    return out;
}

// Decodes IPv4/TCP headers out of the captured bytes for the given linktype.
// Returns false for anything that is not IPv4 TCP.
bool decode_ip_tcp(std::string_view frame, uint16_t linktype, Packet& pkt) {
    std::string_view ip = frame;
    if (linktype == kLinkEthernet) {
        if (frame.size() < 14 || be16(frame, 12) != 0x0800)
            return false;
        ip = frame.substr(14);
    } else if (linktype != kLinkRaw && linktype != kLinkIpv4) {
        return false;
    }
    if (ip.size() < 20 || (static_cast<uint8_t>(ip[0]) >> 4) != 4)
        return false;
    size_t ihl = (static_cast<uint8_t>(ip[0]) & 0x0f) * 4u;
    if (ihl < 20 || ip.size() < ihl)
        return false;
    if (static_cast<uint8_t>(ip[9]) != 6) // TCP
        return false;
    size_t total = be16(ip, 2);
    if (total < ihl || total > ip.size())
        total = ip.size(); // tolerate captures that trimmed padding info
    std::string_view tcp = ip.substr(ihl, total - ihl);
    if (tcp.size() < 20)
        return false;
    size_t doff = (static_cast<uint8_t>(tcp[12]) >> 4) * 4u;
    if (doff < 20 || tcp.size() < doff)
        return false;
    pkt.src.ip = ipv4_to_string(ip, 12);
    pkt.dst.ip = ipv4_to_string(ip, 16);
    pkt.src.port = static_cast<uint16_t>(be16(tcp, 0));
    pkt.dst.port = static_cast<uint16_t>(be16(tcp, 2));
    pkt.tcp_seq = be32(tcp, 4);
    pkt.tcp_ack = be32(tcp, 8);
    pkt.payload = std::string(tcp.substr(doff));
    return true;
}

// "app=<package>[;sni=<host>]"
void parse_annotation(std::string_view comment, Packet& pkt) {
    pkt.comment = std::string(comment);
    for (const auto& field : split(comment, ";")) {
        auto eq = field.find('=');
        if (eq == std::string::npos)
            continue;
        auto key = trim(std::string_view(field).substr(0, eq));
        auto val = trim(std::string_view(field).substr(eq + 1));
        if (key == "app")
            pkt.app_id = std::string(val);
        else if (key == "sni")
            pkt.sni = canonical_host(val);
    }
}

} // namespace

bool looks_like_pcapng(std::string_view head) {
    return head.size() >= 4 && get_u32(head, 0, false) == kSectionHeader;
}

std::vector<Packet> read_pcapng_bytes(std::string_view data, PcapngStats* stats) {
    PcapngStats local;
    PcapngStats& st = stats ? *stats : local;
    std::vector<Packet> packets;

    Cursor cur{data};
    bool in_section = false;
    std::vector<uint16_t> if_linktype;
    std::vector<int64_t> if_tsdiv; // ticks per second divisor, default 1e6

    while (!cur.eof()) {
        uint64_t off = cur.pos;
        if (cur.remaining() < 12)
            throw MalformedBlock(off, "truncated block header");
        uint32_t type = get_u32(cur.data, cur.pos, cur.swap);
        if (type == kSectionHeader) {
            // byte-order magic decides endianness for this section
            uint32_t magic = get_u32(cur.data, cur.pos + 8, false);
            if (magic == kByteOrderMagic)
                cur.swap = false;
            else if (__builtin_bswap32(magic) == kByteOrderMagic)
                cur.swap = true;
            else
                throw MalformedBlock(off, "bad byte-order magic");
            in_section = true;
            if_linktype.clear();
            if_tsdiv.clear();
        } else if (!in_section) {
            throw MalformedBlock(off, "block before section header");
        }
        uint32_t total_len = get_u32(cur.data, cur.pos + 4, cur.swap);
        if (total_len < 12 || total_len % 4 != 0 || cur.remaining() < total_len)
            throw MalformedBlock(off, "bad block length");
        uint32_t tail_len = get_u32(cur.data, cur.pos + total_len - 4, cur.swap);
        if (tail_len != total_len)
            throw MalformedBlock(off, "trailing length mismatch");
        std::string_view body = cur.data.substr(cur.pos + 8, total_len - 12);

        if (type == kInterfaceDescription) {
            if (body.size() < 8)
                throw MalformedBlock(off, "short interface block");
            if_linktype.push_back(get_u16(body, 0, cur.swap));
            int64_t div = 1000000;
            for (const auto& opt : parse_options(body, 8, cur.swap, off)) {
                if (opt.code == kOptTsResol && !opt.value.empty()) {
                    uint8_t r = static_cast<uint8_t>(opt.value[0]);
                    div = 1;
                    if (r & 0x80) {
                        for (int i = 0; i < (r & 0x7f); ++i)
                            div *= 2;
                    } else {
                        for (int i = 0; i < r; ++i)
                            div *= 10;
                    }
                }
            }
            if_tsdiv.push_back(div);
        } else if (type == kEnhancedPacket) {
            if (body.size() < 20)
                throw MalformedBlock(off, "short packet block");
            ++st.packets_total;
            uint32_t if_id = get_u32(body, 0, cur.swap);
            uint64_t ts = (static_cast<uint64_t>(get_u32(body, 4, cur.swap)) << 32) |
                          get_u32(body, 8, cur.swap);
            uint32_t cap_len = get_u32(body, 12, cur.swap);
            if (20 + cap_len > body.size())
                throw MalformedBlock(off, "packet data overruns block");
            uint16_t linktype = if_id < if_linktype.size() ? if_linktype[if_id] : kLinkIpv4;
            int64_t div = if_id < if_tsdiv.size() ? if_tsdiv[if_id] : 1000000;

            Packet pkt;
            // normalize to microseconds, zero-padding coarser resolutions
            pkt.ts_us = div == 1000000 ? static_cast<int64_t>(ts)
                                       : static_cast<int64_t>(ts) * 1000000 / div;
            size_t opt_at = 20 + ((cap_len + 3u) & ~3u);
            for (const auto& opt : parse_options(body, opt_at, cur.swap, off))
                if (opt.code == kOptComment)
                    parse_annotation(opt.value, pkt);

            if (!decode_ip_tcp(body.substr(20, cap_len), linktype, pkt)) {
                ++st.packets_not_tcp;
            } else if (pkt.app_id.empty()) {
                ++st.packets_missing_annotation;
            } else {
                packets.push_back(std::move(pkt));
            }
        }
        cur.pos += total_len;
    }
    return packets;
}

std::vector<Packet> read_pcapng(const std::string& path, PcapngStats* stats) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open capture: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string data = buf.str();
    return read_pcapng_bytes(data, stats);
}

namespace {

void put_u16(std::string& s, uint16_t v) {
    s.append(reinterpret_cast<const char*>(&v), 2);
}
void put_u32(std::string& s, uint32_t v) {
    s.append(reinterpret_cast<const char*>(&v), 4);
}

void append_block(std::ostream& out, uint32_t type, const std::string& body) {
    uint32_t padded = (static_cast<uint32_t>(body.size()) + 3u) & ~3u;
    uint32_t total = padded + 12;
    std::string blk;
    put_u32(blk, type);
    put_u32(blk, total);
    blk += body;
    blk.append(padded - body.size(), '\0');
    put_u32(blk, total);
    out.write(blk.data(), static_cast<std::streamsize>(blk.size()));
}

void append_option(std::string& body, uint16_t code, std::string_view value) {
    put_u16(body, code);
    put_u16(body, static_cast<uint16_t>(value.size()));
    body.append(value);
    body.append((4 - value.size() % 4) % 4, '\0');
}

uint32_t ipv4_from_string(const std::string& ip) {
    auto parts = split(ip, ".");
    if (parts.size() != 4)
        throw std::runtime_error("writer expects dotted-quad IPv4, got: " + ip);
    uint32_t v = 0;
    for (const auto& p : parts)
        v = (v << 8) | (std::stoul(p) & 0xff);
    return v;
}

} // namespace

PcapngWriter::PcapngWriter(std::ostream& out) : out_(out) {
    std::string shb;
    put_u32(shb, kByteOrderMagic);
    put_u16(shb, 1); // major
    put_u16(shb, 0); // minor
    shb.append(8, '\xff'); // unknown section length
    append_block(out_, kSectionHeader, shb);

    std::string idb;
    put_u16(idb, kLinkIpv4);
    put_u16(idb, 0);
    put_u32(idb, 0); // snaplen: unlimited
    append_block(out_, kInterfaceDescription, idb);
}

void PcapngWriter::write_packet(const Packet& pkt) {
    // raw IPv4 + TCP, checksums left zero
    std::string frame;
    uint16_t ip_total = static_cast<uint16_t>(40 + pkt.payload.size());
    frame.push_back(0x45);
    frame.push_back(0);
    frame.push_back(static_cast<char>(ip_total >> 8));
    frame.push_back(static_cast<char>(ip_total & 0xff));
    frame.append(4, '\0'); // id, flags
    frame.push_back(64);   // ttl
    frame.push_back(6);    // tcp
    frame.append(2, '\0'); // checksum
    uint32_t src = ipv4_from_string(pkt.src.ip);
    uint32_t dst = ipv4_from_string(pkt.dst.ip);
    for (int i = 3; i >= 0; --i)
        frame.push_back(static_cast<char>((src >> (8 * i)) & 0xff));
    for (int i = 3; i >= 0; --i)
        frame.push_back(static_cast<char>((dst >> (8 * i)) & 0xff));
    frame.push_back(static_cast<char>(pkt.src.port >> 8));
    frame.push_back(static_cast<char>(pkt.src.port & 0xff));
    frame.push_back(static_cast<char>(pkt.dst.port >> 8));
    frame.push_back(static_cast<char>(pkt.dst.port & 0xff));
    for (int i = 3; i >= 0; --i)
        frame.push_back(static_cast<char>((pkt.tcp_seq >> (8 * i)) & 0xff));
    for (int i = 3; i >= 0; --i)
        frame.push_back(static_cast<char>((pkt.tcp_ack >> (8 * i)) & 0xff));
    frame.push_back(0x50); // data offset 5
    frame.push_back(0x18); // PSH|ACK
    frame.push_back(0x20); // window
    frame.push_back(0);
    frame.append(4, '\0'); // checksum, urgent
    frame += pkt.payload;

    std::string body;
    put_u32(body, 0); // interface id
    uint64_t ts = static_cast<uint64_t>(pkt.ts_us);
    put_u32(body, static_cast<uint32_t>(ts >> 32));
    put_u32(body, static_cast<uint32_t>(ts & 0xffffffffu));
    put_u32(body, static_cast<uint32_t>(frame.size()));
    put_u32(body, static_cast<uint32_t>(frame.size()));
    body += frame;
    body.append((4 - frame.size() % 4) % 4, '\0');
    if (!pkt.app_id.empty() || !pkt.sni.empty()) {
        std::string comment = "app=" + pkt.app_id;
        if (!pkt.sni.empty())
            comment += ";sni=" + pkt.sni;
        append_option(body, kOptComment, comment);
        put_u16(body, kOptEnd);
        put_u16(body, 0);
    }
    append_block(out_, kEnhancedPacket, body);
}

} // namespace flowaudit
