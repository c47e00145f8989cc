#pragma once

#include <chrono>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "mugi/reference_set.hpp"

namespace mugi {

class ReferenceCache;

// Recorded next to every cached reference set.
inline constexpr std::string_view kPromptVersion = "mugi-zeroshot-v1";

// Zero-shot passage-generation prompt with the query inserted verbatim.
// Throws InvalidArgument for an empty query.
std::string render_prompt(std::string_view query);

struct GenerationConfig {
    std::string model_id = "gpt-4-1106-preview";
    std::size_t n = 5;
    double temperature = 1.0;
    std::size_t max_tokens = 256;
    std::chrono::milliseconds timeout{60'000};
    std::size_t max_retries = 3;
    std::chrono::milliseconds backoff_base{500};

    void validate() const;
};

// Chat-completion backend. Implementations perform exactly one request per
// call and throw ServiceError on transport or HTTP failure; retrying is the
// caller's job.
class ChatService {
public:
    virtual ~ChatService() = default;
    virtual std::vector<std::string> complete(const std::string& prompt, const GenerationConfig& config,
                                              std::size_t n) = 0;
};

// Where a remote service lives. The credential is looked up in the named
// environment variable at request time and never written anywhere.
struct ServiceEndpoint {
    std::string url;          // e.g. http://localhost:8000/v1/chat/completions
    std::string api_key_env;  // empty: send no Authorization header
};

// OpenAI-compatible /chat/completions client.
class OpenAIChatService : public ChatService {
public:
    explicit OpenAIChatService(ServiceEndpoint endpoint);
    std::vector<std::string> complete(const std::string& prompt, const GenerationConfig& config,
                                      std::size_t n) override;

private:
    ServiceEndpoint endpoint_;
};

// Request/response bodies of the chat-completions wire protocol.
std::string chat_request_body(const std::string& prompt, const GenerationConfig& config, std::size_t n);
std::vector<std::string> parse_chat_response(std::string_view body);

// Collects config.n non-empty, whitespace-trimmed samples in arrival order.
// Failed requests and empty samples are retried with exponential backoff up
// to config.max_retries times; after that the last ServiceError propagates,
// or a ServiceError naming query_id if samples kept coming back empty. The
// result is stored in `cache` (when given) before returning.
ReferenceSet generate_references(ChatService& service, const std::string& query_id, std::string_view query,
                                 const GenerationConfig& config, ReferenceCache* cache = nullptr);

// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

std::string trim(std::string_view text);

}  // namespace mugi
