// Copyright 2026 The coopmech Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "coopmech/digest.hpp"
#include "coopmech/errors.hpp"

namespace coopmech {

struct ChatMessage {
  std::string role;
  std::string content;
  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

struct SamplingParams {
  double temperature = 1.0;
  std::optional<double> top_p;
  std::optional<int> max_tokens;
};

struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  SamplingParams sampling;
};

inline nlohmann::json to_json(const ChatRequest& r) {
  nlohmann::json j;
  j["model"] = r.model;
  j["messages"] = nlohmann::json::array();
  for (const auto& m : r.messages) j["messages"].push_back({{"role", m.role}, {"content", m.content}});
  j["temperature"] = r.sampling.temperature;
  if (r.sampling.top_p) j["top_p"] = *r.sampling.top_p;
  if (r.sampling.max_tokens) j["max_tokens"] = *r.sampling.max_tokens;
  return j;
}

// Key of a request in canned-response directories.
inline std::string request_hash(const ChatRequest& r) { return sha256_hex(to_json(r).dump()); }

class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  virtual std::string complete(const ChatRequest& request) = 0;
};

// Replays responses stored as <dir>/<request hash>.txt.
class CannedTransport : public ChatTransport {
 public:
  explicit CannedTransport(std::filesystem::path dir) : dir_(std::move(dir)) {
    if (!std::filesystem::is_directory(dir_))
      throw ConfigError("canned transport: not a directory: " + dir_.string());
  }

  std::string complete(const ChatRequest& request) override {
    const auto path = dir_ / (request_hash(request) + ".txt");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw TransportError("canned transport: no response recorded for request " + path.filename().string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  }

 private:
  std::filesystem::path dir_;
};

// Forwards to another transport and stores each exchange in the canned
// layout. An existing response file is never overwritten.
class RecordingTransport : public ChatTransport {
 public:
  RecordingTransport(std::shared_ptr<ChatTransport> inner, std::filesystem::path dir)
      : inner_(std::move(inner)), dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
  }

  std::string complete(const ChatRequest& request) override {
    std::string text = inner_->complete(request);
    const std::string hash = request_hash(request);
    std::lock_guard<std::mutex> lock(mu_);
    const auto path = dir_ / (hash + ".txt");
    if (!std::filesystem::exists(path)) {
      std::ofstream(path, std::ios::binary) << text;
      std::ofstream(dir_ / (hash + ".request.json"), std::ios::binary) << to_json(request).dump(2) << "\n";
    }
    return text;
  }

 private:
  std::shared_ptr<ChatTransport> inner_;
  std::filesystem::path dir_;
  std::mutex mu_;
};

struct HttpTransportConfig {
  std::string base_url = "http://127.0.0.1:8000";  // scheme://host[:port]
  std::string path = "/v1/chat/completions";
  std::string api_key_env = "COOPMECH_API_KEY";    // empty: no Authorization header
  double timeout_s = 120.0;
  int retries = 2;
  double backoff_s = 1.0;
  int max_in_flight = 4;
};

// OpenAI-compatible chat completion endpoint.
class HttpChatTransport : public ChatTransport {
 public:
  explicit HttpChatTransport(HttpTransportConfig cfg) : cfg_(std::move(cfg)), slots_(std::max(1, cfg_.max_in_flight)) {
    if (cfg_.retries < 0) throw ConfigError("http transport: retries must be >= 0");
    if (!(cfg_.timeout_s > 0)) throw ConfigError("http transport: timeout must be positive");
    if (!cfg_.api_key_env.empty()) {
      if (const char* key = std::getenv(cfg_.api_key_env.c_str())) api_key_ = key;
    }
  }

  std::string complete(const ChatRequest& request) override {
    slots_.acquire();
    struct Release {
      std::counting_semaphore<1024>& s;
      ~Release() { s.release(); }
    } release{slots_};

    const std::string body = to_json(request).dump();
    std::string last_error;
    for (int attempt = 0; attempt <= cfg_.retries; ++attempt) {
      if (attempt > 0)
        std::this_thread::sleep_for(std::chrono::duration<double>(cfg_.backoff_s * (1 << (attempt - 1))));
      httplib::Client client(cfg_.base_url);
      const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
          std::chrono::duration<double>(cfg_.timeout_s));
      client.set_connection_timeout(timeout);
      client.set_read_timeout(timeout);
      client.set_write_timeout(timeout);
      httplib::Headers headers;
      if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
      auto res = client.Post(cfg_.path, headers, body, "application/json");
      if (!res) {
        last_error = "request failed: " + httplib::to_string(res.error());
        continue;
      }
      if (res->status == 429 || res->status >= 500) {
        last_error = "HTTP " + std::to_string(res->status);
        continue;
      }
      if (res->status != 200) throw TransportError("http transport: HTTP " + std::to_string(res->status) + ": " + res->body);
      try {
        const auto j = nlohmann::json::parse(res->body);
        return j.at("choices").at(0).at("message").at("content").get<std::string>();
      } catch (const nlohmann::json::exception& e) {
        throw TransportError(std::string("http transport: malformed completion: ") + e.what());
      }
    }
    throw TransportError("http transport: giving up after " + std::to_string(cfg_.retries + 1) +
                         " attempt(s): " + last_error);
  }

 private:
  HttpTransportConfig cfg_;
  std::string api_key_;
  std::counting_semaphore<1024> slots_;
};

}  // namespace coopmech
