#pragma once

#include <cstdio>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "meshat/platform.hpp"

namespace meshat::service {

// JSONL encoding of a log: one event per line, each line newline-terminated.
std::string log_to_text(std::span<const Event> log);

// Strict parse. Every line must decode and seqs must run 1, 2, 3, ...
// Throws Error(SchemaMismatch) naming the offending seq.
std::vector<Event> log_from_text(std::string_view text);

// Throws Error(IoFailure).
void write_log_file(const std::filesystem::path& path, std::span<const Event> log);
std::vector<Event> read_log_file(const std::filesystem::path& path);

// Feeds `events` into an empty platform. Throws Error(StoreNotEmpty) if the
// platform already holds events, Error(SchemaMismatch) if an event cannot be
// applied or the result breaks a domain invariant.
void load_events(Platform& p, std::span<const Event> events);

// Append-only file backing a Platform. Each append is written as a single
// line and flushed to the device before it is acknowledged.
class FileStore final : public EventSink {
 public:
  // Opens (creating if absent) and recovers the durable prefix: a trailing
  // line without its newline is an interrupted append and is cut off. Any
  // other undecodable line throws Error(CorruptStore).
  explicit FileStore(std::filesystem::path path);
  ~FileStore() override;

  FileStore(const FileStore&) = delete;
  FileStore& operator=(const FileStore&) = delete;

  const std::vector<Event>& recovered() const { return recovered_; }
  std::size_t truncated_bytes() const { return truncated_bytes_; }
  const std::filesystem::path& path() const { return path_; }

  void append(const Event& event) override;

 private:
  std::filesystem::path path_;
  std::FILE* file_{nullptr};
  std::vector<Event> recovered_;
  std::size_t truncated_bytes_{0};
};

}  // namespace meshat::service
