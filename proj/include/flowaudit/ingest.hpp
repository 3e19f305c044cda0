#pragma once

#include "flowaudit/transaction.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace flowaudit {

enum class CaptureFormat { Auto, Pcapng, Jsonl };

struct UnreadableFile : std::runtime_error {
    explicit UnreadableFile(const std::string& path)
        : std::runtime_error("cannot read " + path) {}
};

struct IngestStats {
    size_t transactions = 0;
    size_t packets_skipped_no_annotation = 0;
    size_t packets_skipped_not_tcp = 0;
    size_t streams_skipped_no_host = 0;
    size_t jsonl_lines_skipped = 0;
};

// Per-stream payload bytes ordered by sequence number. Overlapping
// retransmissions keep first-seen bytes; a gap truncates the stream there.
std::vector<std::pair<TcpStreamKey, std::string>> reassemble(const std::vector<Packet>& packets);

// Streams become transactions: parsed HTTP requests/responses, RAW payloads,
// or bodiless TLS records when only an SNI is known.
std::vector<HttpTransaction> transactions_from_packets(const std::vector<Packet>& packets,
                                                       IngestStats* stats = nullptr);

std::vector<HttpTransaction> load_transactions(const std::string& path,
                                               CaptureFormat format = CaptureFormat::Auto,
                                               IngestStats* stats = nullptr);

std::vector<HttpTransaction> transactions_from_jsonl(const std::string& text,
                                                     IngestStats* stats = nullptr);
std::string transaction_to_json(const HttpTransaction& txn);
void write_transactions_jsonl(const std::string& path, const std::vector<HttpTransaction>& txns);

} // namespace flowaudit
