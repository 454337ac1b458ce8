#include "meshat/service/storage.hpp"

#include <unistd.h>

#include <fstream>
#include <sstream>

#include "meshat/codec.hpp"
#include "meshat/error.hpp"

namespace meshat::service {

namespace fs = std::filesystem;

std::string log_to_text(std::span<const Event> log) {
  std::string out;
  for (const auto& e : log) {
    out += event_to_line(e);
    out += '\n';
  }
  return out;
}

std::vector<Event> log_from_text(std::string_view text) {
  std::vector<Event> events;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const Seq expected = events.size() + 1;
    auto nl = text.find('\n', pos);
    const bool terminated = nl != std::string_view::npos;
    auto line = text.substr(pos, terminated ? nl - pos : std::string_view::npos);
    pos = terminated ? nl + 1 : text.size();
    try {
      if (!terminated) throw Error(ErrorCode::SchemaMismatch, "line is not terminated");
      Event e = event_from_line(line);
      if (e.seq != expected)
        throw Error(ErrorCode::SchemaMismatch, "found seq " + std::to_string(e.seq));
      events.push_back(std::move(e));
    } catch (const Error& err) {
      throw Error(ErrorCode::SchemaMismatch,
                  "seq " + std::to_string(expected) + ": " + err.what());
    }
  }
  return events;
}

void write_log_file(const fs::path& path, std::span<const Event> log) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
  const auto text = log_to_text(log);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw Error(ErrorCode::IoFailure, "write to " + path.string() + " failed");
}

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoFailure, "read of " + path.string() + " failed");
  return std::move(buf).str();
}

}  // namespace

std::vector<Event> read_log_file(const fs::path& path) { return log_from_text(slurp(path)); }

void load_events(Platform& p, std::span<const Event> events) {
  if (p.last_seq() != 0) throw Error(ErrorCode::StoreNotEmpty, "the store already holds events");
  for (const auto& e : events) {
    try {
      p.replay_event(e);
    } catch (const Error& err) {
      throw Error(ErrorCode::SchemaMismatch, "seq " + std::to_string(e.seq) + ": " + err.what());
    } catch (const std::exception& err) {
      throw Error(ErrorCode::SchemaMismatch,
                  "seq " + std::to_string(e.seq) + ": inconsistent event (" + err.what() + ")");
    }
  }
  auto violations = invariant_violations(p.state());
  if (!violations.empty())
    throw Error(ErrorCode::SchemaMismatch, "log breaks an invariant: " + violations.front());
}

FileStore::FileStore(fs::path path) : path_(std::move(path)) {
  std::string text;
  if (fs::exists(path_)) text = slurp(path_);

  std::size_t durable = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string::npos) break;
    const Seq expected = recovered_.size() + 1;
    try {
      Event e = event_from_line(std::string_view(text).substr(pos, nl - pos));
      if (e.seq != expected)
        throw Error(ErrorCode::CorruptStore, "found seq " + std::to_string(e.seq));
      recovered_.push_back(std::move(e));
    } catch (const Error& err) {
      throw Error(ErrorCode::CorruptStore, path_.string() + ": seq " +
                                               std::to_string(expected) + ": " + err.what());
    }
    pos = nl + 1;
    durable = pos;
  }
  truncated_bytes_ = text.size() - durable;
  if (truncated_bytes_ > 0) fs::resize_file(path_, durable);

  file_ = std::fopen(path_.c_str(), "ab");
  if (!file_) throw Error(ErrorCode::IoFailure, "cannot open " + path_.string());
}

FileStore::~FileStore() {
  if (file_) std::fclose(file_);
}

void FileStore::append(const Event& event) {
  std::string line = event_to_line(event);
  line += '\n';
  const long before = std::ftell(file_);
  const bool ok = std::fwrite(line.data(), 1, line.size(), file_) == line.size() &&
                  std::fflush(file_) == 0 && ::fsync(::fileno(file_)) == 0;
  if (!ok) {
    std::clearerr(file_);
    if (before >= 0) {
      [[maybe_unused]] int rc = ::ftruncate(::fileno(file_), before);
    }
    throw Error(ErrorCode::IoFailure, "append to " + path_.string() + " failed");
  }
}

}  // namespace meshat::service
