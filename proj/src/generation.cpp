#include "mugi/generation.hpp"

#include <ctime>

#include <nlohmann/json.hpp>

#include "http_client.hpp"
#include "mugi/error.hpp"
#include "mugi/reference_cache.hpp"

namespace mugi {

std::string render_prompt(std::string_view query) {
    if (query.empty()) throw InvalidArgument("render_prompt: empty query");
    std::string prompt =
        "Write a passage that provides relevant background knowledge to answer the following query: ";
    prompt.append(query);
    return prompt;
}

void GenerationConfig::validate() const {
    if (n < 1) throw InvalidArgument("generation: n must be >= 1");
    if (!(temperature >= 0.0)) throw InvalidArgument("generation: temperature must be >= 0");
    if (model_id.empty()) throw InvalidArgument("generation: model id is empty");
}

std::string chat_request_body(const std::string& prompt, const GenerationConfig& config, std::size_t n) {
    nlohmann::json body = {
        {"model", config.model_id},
        {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})},
        {"temperature", config.temperature},
        {"max_tokens", config.max_tokens},
        {"n", n},
    };
    return body.dump();
}

std::vector<std::string> parse_chat_response(std::string_view body) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
        throw ServiceError(std::string("chat response is not JSON: ") + e.what());
    }
    const auto choices = doc.find("choices");
    if (choices == doc.end() || !choices->is_array()) throw ServiceError("chat response has no 'choices' array");

    std::vector<std::string> out;
    for (const auto& choice : *choices) {
        const auto msg = choice.find("message");
        if (msg == choice.end() || !msg->is_object()) throw ServiceError("chat choice without 'message'");
        const auto content = msg->find("content");
        out.push_back(content != msg->end() && content->is_string() ? content->get<std::string>() : std::string{});
    }
    return out;
}

OpenAIChatService::OpenAIChatService(ServiceEndpoint endpoint) : endpoint_(std::move(endpoint)) {}

std::vector<std::string> OpenAIChatService::complete(const std::string& prompt, const GenerationConfig& config,
                                                     std::size_t n) {
    const auto res = detail::post_json(endpoint_, chat_request_body(prompt, config, n), config.timeout);
    return parse_chat_response(res.body);
}

std::string trim(std::string_view text) {
    constexpr std::string_view ws = " \t\r\n\f\v";
    const auto b = text.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = text.find_last_not_of(ws);
    return std::string(text.substr(b, e - b + 1));
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

ReferenceSet generate_references(ChatService& service, const std::string& query_id, std::string_view query,
                                 const GenerationConfig& config, ReferenceCache* cache) {
    config.validate();
    const std::string prompt = render_prompt(query);

    ReferenceSet rs;
    rs.query_id = query_id;
    rs.query = std::string(query);
    rs.model_id = config.model_id;
    rs.prompt_version = std::string(kPromptVersion);

    // Requests that fail outright and rounds that bring back only empty text
    // both draw on the same retry budget.
    std::size_t failures = 0;
    while (rs.references.size() < config.n) {
        const std::size_t missing = config.n - rs.references.size();
        std::vector<std::string> samples;
        try {
            samples = service.complete(prompt, config, missing);
        } catch (const ServiceError&) {
            if (failures >= config.max_retries) throw;
            std::this_thread::sleep_for(config.backoff_base * (std::int64_t{1} << std::min<std::size_t>(failures, 20)));
            ++failures;
            continue;
        }
        bool progress = false;
        for (auto& s : samples) {
            if (rs.references.size() == config.n) break;
            std::string text = trim(s);
            if (text.empty()) continue;
            rs.references.push_back(std::move(text));
            progress = true;
        }
        if (!progress) {
            if (failures >= config.max_retries) {
                throw ServiceError("generation for query '" + query_id + "' kept returning empty completions");
            }
            std::this_thread::sleep_for(config.backoff_base * (std::int64_t{1} << std::min<std::size_t>(failures, 20)));
            ++failures;
        }
    }

    rs.created_at = utc_timestamp();
    if (cache != nullptr) cache->put(rs);
    return rs;
}

}  // namespace mugi
