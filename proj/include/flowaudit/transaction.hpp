#pragma once

#include <cstdint>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace flowaudit {

struct Endpoint {
    std::string ip;
    uint16_t port = 0;
    auto operator<=>(const Endpoint&) const = default;
};

// One captured TCP segment, already annotated with the app that produced it.
struct Packet {
    std::string app_id;
    int64_t ts_us = 0;
    Endpoint src;
    Endpoint dst;
    uint32_t tcp_seq = 0;
    uint32_t tcp_ack = 0;
    std::string payload;
    std::string comment; // raw annotation ("app=<pkg>[;sni=<host>]")
    std::string sni;
};

struct TcpStreamKey {
    Endpoint src;
    Endpoint dst;
    std::string app_id;
    auto operator<=>(const TcpStreamKey&) const = default;
};

enum class Direction { Request, Response };

// One application-layer exchange attributed to an app. "method" is an HTTP
// method for parsed requests, "HTTP" for parsed responses, "RAW" for
// unparsed payloads and "TLS" for SNI-only flows with no decrypted bytes.
struct HttpTransaction {
    std::string app_id;
    int64_t ts_us = 0;
    std::string host; // lowercase, no trailing dot
    std::string sni;
    std::string method;
    std::string path;
    std::string query;
    std::vector<std::pair<std::string, std::string>> headers; // stored verbatim
    std::string body;
    Direction direction = Direction::Request;

    // Case-insensitive header lookup; returns "" when absent.
    std::string header(std::string_view name) const;
};

std::string canonical_host(std::string_view host);

} // namespace flowaudit
