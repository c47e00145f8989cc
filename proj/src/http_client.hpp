#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <string>
#include <thread>

#include "mugi/error.hpp"
#include "mugi/generation.hpp"

namespace mugi::detail {

struct HttpResponse {
    int status = 0;
    std::string body;
};

// POSTs a JSON body to endpoint.url. Transport failures and non-2xx replies
// throw ServiceError.
HttpResponse post_json(const ServiceEndpoint& endpoint, const std::string& body, std::chrono::milliseconds timeout);

// Calls f() until it returns without throwing ServiceError, at most
// max_retries + 1 times, sleeping backoff_base * 2^attempt in between.
template <typename F>
auto with_retries(std::size_t max_retries, std::chrono::milliseconds backoff_base, F&& f) -> decltype(f()) {
    for (std::size_t attempt = 0;; ++attempt) {
        try {
            return f();
        } catch (const ServiceError&) {
            if (attempt >= max_retries) throw;
            std::this_thread::sleep_for(backoff_base * (std::int64_t{1} << std::min<std::size_t>(attempt, 20)));
        }
    }
}

}  // namespace mugi::detail
