#include "meshat/service/config.hpp"

#include <cstdlib>
#include <fstream>

#include "meshat/codec.hpp"
#include "meshat/error.hpp"

namespace meshat::service {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); }

int parse_port(const std::string& text) {
  try {
    std::size_t used = 0;
    const int port = std::stoi(text, &used);
    if (used == text.size()) return port;
  } catch (const std::exception&) {
  }
  invalid("port '" + text + "' is not a number");
}

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

}  // namespace

Config load_config(const std::optional<std::filesystem::path>& file) {
  Config c;
  if (file) {
    std::ifstream in(*file);
    if (!in) invalid("cannot read config file " + file->string());
    Json j = Json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object()) invalid(file->string() + " is not a JSON object");
    try {
      for (const auto& [key, value] : j.items()) {
        if (key == "host") c.host = value.get<std::string>();
        else if (key == "port") c.port = value.get<int>();
        else if (key == "storage") c.storage = value.get<std::string>();
        else if (key == "questionnaire") c.questionnaire = value.get<std::string>();
        else if (key == "session_ttl_seconds") c.session_ttl_seconds = value.get<int>();
        else invalid("unknown config key '" + key + "'");
      }
    } catch (const Json::exception& e) {
      invalid(std::string("bad config value: ") + e.what());
    }
  }
  if (auto v = env("MESHAT_HOST")) c.host = *v;
  if (auto v = env("MESHAT_PORT")) c.port = parse_port(*v);
  if (auto v = env("MESHAT_STORAGE")) c.storage = *v;
  if (auto v = env("MESHAT_QUESTIONNAIRE")) c.questionnaire = *v;

  if (c.port < 0 || c.port > 65535) invalid("port must lie in [0, 65535]");
  if (c.storage.empty()) invalid("storage path is empty");
  if (c.session_ttl_seconds <= 0) invalid("session_ttl_seconds must be positive");
  return c;
}

}  // namespace meshat::service
