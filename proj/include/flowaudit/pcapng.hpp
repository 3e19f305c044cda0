#pragma once

#include "flowaudit/transaction.hpp"

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace flowaudit {

struct MalformedBlock : std::runtime_error {
    uint64_t offset;
    explicit MalformedBlock(uint64_t off, const std::string& what)
        : std::runtime_error("malformed pcapng block at offset " + std::to_string(off) + ": " +
                             what),
          offset(off) {}
};

struct PcapngStats {
    size_t packets_total = 0;
    size_t packets_missing_annotation = 0; // skipped, not fatal
    size_t packets_not_tcp = 0;            // skipped, not fatal
};

// Reads Section Header, Interface Description and Enhanced Packet blocks.
// Enhanced Packet opt_comment carries "app=<package>[;sni=<host>]"; capture
// link types: Ethernet (1), raw IPv4 (228) and LINKTYPE_RAW (101).
std::vector<Packet> read_pcapng(const std::string& path, PcapngStats* stats = nullptr);
std::vector<Packet> read_pcapng_bytes(std::string_view data, PcapngStats* stats = nullptr);

// Minimal writer used to synthesize captures (tests, fixtures). Packets are
// emitted as raw IPv4/TCP with the adjusted sequence numbers given.
class PcapngWriter {
  public:
    explicit PcapngWriter(std::ostream& out);
    void write_packet(const Packet& pkt);

  private:
    std::ostream& out_;
};

bool looks_like_pcapng(std::string_view head);

} // namespace flowaudit
