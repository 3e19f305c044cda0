#include "flowaudit/ingest.hpp"

#include "flowaudit/pcapng.hpp"
#include "flowaudit/text.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

using nlohmann::json;

namespace flowaudit {
namespace {

const char* kMethods[] = {"GET",     "POST",  "PUT",   "DELETE", "HEAD",
                          "OPTIONS", "PATCH", "TRACE", "CONNECT"};

bool starts_with_method(std::string_view s) {
    for (const char* m : kMethods)
        if (s.starts_with(m) && s.size() > std::strlen(m) && s[std::strlen(m)] == ' ')
            return true;
    return false;
}

struct HttpMessage {
    std::string start_line;
    std::vector<std::pair<std::string, std::string>> headers;
    std::string body;
};

std::string header_value(const HttpMessage& msg, std::string_view name) {
    std::string want = to_lower(name);
    for (const auto& [k, v] : msg.headers)
        if (to_lower(k) == want)
            return v;
    return "";
}

// One HTTP/1.x message starting at `pos`; advances `pos` past it.
// Returns false when the bytes do not form a complete parseable message.
bool parse_message(std::string_view data, size_t& pos, bool is_response, HttpMessage& out) {
    size_t line_end = data.find("\r\n", pos);
    if (line_end == std::string_view::npos)
        return false;
    out.start_line = std::string(data.substr(pos, line_end - pos));
    size_t cur = line_end + 2;
    out.headers.clear();
    while (true) {
        size_t eol = data.find("\r\n", cur);
        if (eol == std::string_view::npos)
            return false;
        if (eol == cur) { // blank line: end of headers
            cur += 2;
            break;
        }
        std::string_view line = data.substr(cur, eol - cur);
        size_t colon = line.find(':');
        if (colon == std::string_view::npos)
            return false;
        out.headers.emplace_back(std::string(trim(line.substr(0, colon))),
                                 std::string(trim(line.substr(colon + 1))));
        cur = eol + 2;
    }

    std::string te = to_lower(header_value(out, "Transfer-Encoding"));
    std::string cl = header_value(out, "Content-Length");
    out.body.clear();
    if (te.find("chunked") != std::string::npos) {
        while (true) {
            size_t eol = data.find("\r\n", cur);
            if (eol == std::string_view::npos)
                return false;
            size_t len = 0;
            try {
                len = std::stoul(std::string(data.substr(cur, eol - cur)), nullptr, 16);
            } catch (...) {
                return false;
            }
            cur = eol + 2;
            if (len == 0) {
                // skip trailers up to final blank line, if present
                size_t end = data.find("\r\n", cur);
                cur = end == std::string_view::npos ? data.size() : end + 2;
                break;
            }
            if (cur + len > data.size())
                return false;
            out.body.append(data.substr(cur, len));
            cur += len;
            if (data.substr(cur, 2) == "\r\n")
                cur += 2;
        }
    } else if (!cl.empty()) {
        size_t len = 0;
        try {
            len = std::stoul(cl);
        } catch (...) {
            return false;
        }
        if (cur + len > data.size())
            return false;
        out.body = std::string(data.substr(cur, len));
        cur += len;
    } else if (is_response) {
        // no framing info: body runs to end of stream
        out.body = std::string(data.substr(cur));
        cur = data.size();
    }
    pos = cur;
    return true;
}

struct StreamInfo {
    TcpStreamKey key;
    std::string payload;
    std::string sni;
    int64_t first_ts = 0;
    size_t first_index = 0; // capture order of the stream's first packet
};

HttpTransaction base_txn(const StreamInfo& s, Direction dir) {
    HttpTransaction t;
    t.app_id = s.key.app_id;
    t.ts_us = s.first_ts;
    t.sni = s.sni;
    t.direction = dir;
    return t;
}

} // namespace

std::vector<std::pair<TcpStreamKey, std::string>> reassemble(const std::vector<Packet>& packets) {
    struct Seg {
        uint32_t seq;
        size_t order;
        const std::string* payload;
    };
    std::map<TcpStreamKey, std::vector<Seg>> streams;
    size_t idx = 0;
    for (const auto& pkt : packets) {
        TcpStreamKey key{pkt.src, pkt.dst, pkt.app_id};
        streams[key].push_back({pkt.tcp_seq, idx++, &pkt.payload});
    }
    std::vector<std::pair<TcpStreamKey, std::string>> out;
    out.reserve(streams.size());
    for (auto& [key, segs] : streams) {
        std::sort(segs.begin(), segs.end(), [](const Seg& a, const Seg& b) {
            return a.seq != b.seq ? a.seq < b.seq : a.order < b.order;
        });
        std::string bytes;
        uint64_t expected = segs.front().seq;
        for (const auto& seg : segs) {
            uint64_t seq = seg.seq;
            if (seq > expected)
                break; // gap terminates the stream
            uint64_t seg_end = seq + seg.payload->size();
            if (seg_end <= expected)
                continue; // full duplicate, first-seen bytes win
            bytes.append(seg.payload->substr(static_cast<size_t>(expected - seq)));
            expected = seg_end;
        }
        out.emplace_back(key, std::move(bytes));
    }
    return out;
}

std::vector<HttpTransaction> transactions_from_packets(const std::vector<Packet>& packets,
                                                       IngestStats* stats) {
    IngestStats local;
    IngestStats& st = stats ? *stats : local;

    std::map<TcpStreamKey, StreamInfo> infos;
    size_t idx = 0;
    for (const auto& pkt : packets) {
        TcpStreamKey key{pkt.src, pkt.dst, pkt.app_id};
        auto [it, fresh] = infos.try_emplace(key);
        if (fresh) {
            it->second.key = key;
            it->second.first_ts = pkt.ts_us;
            it->second.first_index = idx;
        }
        if (it->second.sni.empty())
            it->second.sni = pkt.sni;
        ++idx;
    }
    for (auto& [key, payload] : reassemble(packets))
        infos[key].payload = std::move(payload);

    // Host of a response stream comes from the request side of the same
    // connection; requests carry it in the Host header (else SNI).
    std::map<TcpStreamKey, std::string> request_host;

    std::vector<const StreamInfo*> ordered;
    ordered.reserve(infos.size());
    for (const auto& [key, info] : infos)
        ordered.push_back(&info);
    std::sort(ordered.begin(), ordered.end(),
              [](const StreamInfo* a, const StreamInfo* b) { return a->first_index < b->first_index; });

    struct Pending {
        const StreamInfo* stream;
        std::vector<HttpTransaction> txns;
    };
    std::vector<Pending> pending;

    for (const StreamInfo* s : ordered) {
        Pending p{s, {}};
        std::string_view payload = s->payload;
        if (payload.empty()) {
            if (!s->sni.empty()) {
                auto t = base_txn(*s, Direction::Request);
                t.method = "TLS";
                t.host = s->sni;
                p.txns.push_back(std::move(t));
            }
            pending.push_back(std::move(p));
            continue;
        }
        if (starts_with_method(payload)) {
            size_t pos = 0;
            std::vector<HttpTransaction> parsed;
            bool ok = true;
            while (pos < payload.size()) {
                HttpMessage msg;
                if (!parse_message(payload, pos, false, msg)) {
                    ok = false;
                    break;
                }
                auto words = split(msg.start_line, " ");
                if (words.size() < 2) {
                    ok = false;
                    break;
                }
                auto t = base_txn(*s, Direction::Request);
                t.method = words[0];
                auto qmark = words[1].find('?');
                t.path = words[1].substr(0, qmark);
                t.query = qmark == std::string::npos ? "" : words[1].substr(qmark + 1);
                t.headers = std::move(msg.headers);
                t.body = std::move(msg.body);
                t.host = canonical_host(t.header("Host"));
                if (t.host.empty())
                    t.host = s->sni;
                parsed.push_back(std::move(t));
            }
            if (ok && !parsed.empty()) {
                if (!parsed.front().host.empty())
                    request_host[s->key] = parsed.front().host;
                p.txns = std::move(parsed);
                pending.push_back(std::move(p));
                continue;
            }
        }
        if (payload.starts_with("HTTP/")) {
            size_t pos = 0;
            HttpMessage msg;
            if (parse_message(payload, pos, true, msg)) {
                auto t = base_txn(*s, Direction::Response);
                t.method = "HTTP";
                t.headers = std::move(msg.headers);
                t.body = std::move(msg.body);
                p.txns.push_back(std::move(t));
                pending.push_back(std::move(p));
                continue;
            }
        }
        auto t = base_txn(*s, Direction::Request);
        t.method = "RAW";
        t.body = std::string(payload);
        t.host = s->sni;
        p.txns.push_back(std::move(t));
        pending.push_back(std::move(p));
    }

    std::vector<HttpTransaction> out;
    for (auto& p : pending) {
        TcpStreamKey reverse{p.stream->key.dst, p.stream->key.src, p.stream->key.app_id};
        for (auto& t : p.txns) {
            if (t.host.empty()) {
                auto it = request_host.find(reverse);
                if (it != request_host.end())
                    t.host = it->second;
            }
            if (t.host.empty()) {
                ++st.streams_skipped_no_host;
                continue;
            }
            out.push_back(std::move(t));
        }
    }
    st.transactions = out.size();
    return out;
}

std::vector<HttpTransaction> transactions_from_jsonl(const std::string& text, IngestStats* stats) {
    IngestStats local;
    IngestStats& st = stats ? *stats : local;
    std::vector<HttpTransaction> out;
    std::istringstream in(text);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty())
            continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw std::runtime_error("transactions jsonl line " + std::to_string(lineno) + ": " +
                                     e.what());
        }
        HttpTransaction t;
        t.app_id = j.value("app", "");
        t.ts_us = j.value("ts_us", int64_t{0});
        t.sni = canonical_host(j.value("sni", ""));
        t.host = canonical_host(j.value("host", ""));
        if (t.host.empty())
            t.host = t.sni;
        t.method = j.value("method", "RAW");
        t.path = j.value("path", "");
        t.query = j.value("query", "");
        if (j.contains("headers"))
            for (const auto& kv : j["headers"])
                t.headers.emplace_back(kv.at(0).get<std::string>(), kv.at(1).get<std::string>());
        t.body = base64_decode(j.value("body_b64", ""));
        t.direction = j.value("direction", "request") == "response" ? Direction::Response
                                                                    : Direction::Request;
        if (t.app_id.empty() || t.host.empty()) {
            ++st.jsonl_lines_skipped;
            continue;
        }
        out.push_back(std::move(t));
    }
    st.transactions = out.size();
    return out;
}

std::string transaction_to_json(const HttpTransaction& txn) {
    json j;
    j["app"] = txn.app_id;
    j["ts_us"] = txn.ts_us;
    j["host"] = txn.host;
    j["sni"] = txn.sni;
    j["method"] = txn.method;
    j["path"] = txn.path;
    j["query"] = txn.query;
    json hdrs = json::array();
    for (const auto& [k, v] : txn.headers)
        hdrs.push_back(json::array({k, v}));
    j["headers"] = hdrs;
    j["body_b64"] = base64_encode(txn.body);
    j["direction"] = txn.direction == Direction::Response ? "response" : "request";
    return j.dump();
}

void write_transactions_jsonl(const std::string& path, const std::vector<HttpTransaction>& txns) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    for (const auto& t : txns)
        out << transaction_to_json(t) << '\n';
}

std::vector<HttpTransaction> load_transactions(const std::string& path, CaptureFormat format,
                                               IngestStats* stats) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw UnreadableFile(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string data = buf.str();

    if (format == CaptureFormat::Auto)
        format = looks_like_pcapng(data) ? CaptureFormat::Pcapng : CaptureFormat::Jsonl;

    if (format == CaptureFormat::Pcapng) {
        PcapngStats pstats;
        auto packets = read_pcapng_bytes(data, &pstats);
        auto txns = transactions_from_packets(packets, stats);
        if (stats) {
            stats->packets_skipped_no_annotation = pstats.packets_missing_annotation;
            stats->packets_skipped_not_tcp = pstats.packets_not_tcp;
        }
        return txns;
    }
    return transactions_from_jsonl(data, stats);
}

} // namespace flowaudit
