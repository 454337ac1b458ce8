#pragma once

#include <filesystem>
#include <optional>
#include <string>

namespace meshat::service {

struct Config {
  std::string host{"127.0.0.1"};
  int port{8080};
  std::filesystem::path storage{"meshat.jsonl"};
  std::optional<std::filesystem::path> questionnaire;
  int session_ttl_seconds{8 * 3600};
};

// Reads a JSON object with any of the keys "host", "port", "storage",
// "questionnaire", "session_ttl_seconds", then applies the overrides
// MESHAT_HOST, MESHAT_PORT, MESHAT_STORAGE and MESHAT_QUESTIONNAIRE.
// Without a file only defaults and the environment apply.
// Throws Error(InvalidConfig).
Config load_config(const std::optional<std::filesystem::path>& file);

}  // namespace meshat::service
