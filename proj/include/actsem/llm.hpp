#pragma once

#include <cstdint>
#include <deque>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "actsem/pddl.hpp"

namespace actsem {

struct ChatMessage {
    std::string role;
    std::string content;
};

struct CompletionRequest {
    std::string model = "gpt-4";
    std::vector<ChatMessage> messages;
    double temperature = 0.0;
    int max_tokens = 2048;
    double timeout_s = 60.0;
    int retry_budget = 2;        // retries after the first attempt
    double backoff_base_s = 0.5;  // doubled per retry; 0 disables sleeping
};

struct BackendError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Backend {
public:
    virtual ~Backend() = default;
    virtual std::string complete(const CompletionRequest& request) = 0;
};

// Stable 64-bit digest of (model, temperature, messages); keys replay buckets.
uint64_t prompt_hash(const CompletionRequest& request);

// Chat-completions HTTP backend. Retries timeouts, connection errors, and 5xx
// responses up to the retry budget with exponential backoff; other non-200
// statuses fail immediately.
class HttpBackend : public Backend {
public:
    HttpBackend(std::string base_url, std::string api_key);
    std::string complete(const CompletionRequest& request) override;

private:
    std::string base_url_;
    std::string api_key_;
};

// Scripted backend: responses recorded as a JSON array of
// {"prompt_hash": "<16 hex digits>", "response": "..."}; repeated identical
// prompts consume their bucket positionally.
class ReplayBackend : public Backend {
public:
    static ReplayBackend from_json(const nlohmann::json& pairs);
    static ReplayBackend from_file(const std::string& path);
    std::string complete(const CompletionRequest& request) override;

private:
    std::map<uint64_t, std::deque<std::string>> buckets_;
};

// Append-only JSONL run log; every record gets a monotonically increasing
// "seq" field.
class TranscriptLog {
public:
    explicit TranscriptLog(const std::string& path);
    void append(nlohmann::json record);
    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::ofstream out_;
    int seq_ = 0;
};

// Extracts the recorded (prompt_hash, response) pairs of a transcript, in
// order, as a replay document.
nlohmann::json replay_from_transcript(const std::string& jsonl_path);

// Issues completions and logs every exchange to the transcript (when given).
class LlmClient {
public:
    LlmClient(Backend& backend, TranscriptLog* log, std::string model, double temperature,
              int retry_budget = 2, double timeout_s = 60.0, double backoff_base_s = 0.5);
    std::string complete(const std::vector<ChatMessage>& messages, const std::string& purpose,
                         const std::string& action = "");

private:
    Backend& backend_;
    TranscriptLog* log_;
    std::string model_;
    double temperature_;
    int retry_budget_;
    double timeout_s_;
    double backoff_base_s_;
};

// Keeps lines that parse to a legal ground action; skipped lines are noted.
Plan parse_trajectory_response(const std::string& text, const std::set<GroundAction>& legal,
                               std::vector<std::string>* skipped = nullptr);

// Extracts "(pred ?v ...)" / "(not (pred ?v ...))" literals, canonicalizes
// their variables, and drops anything referencing undeclared predicates,
// wrong arities, non-parameter variables, or type-incompatible bindings.
// Duplicates collapse to the first occurrence.
std::vector<Statement> parse_semantics_response(const std::string& text, const Domain& domain,
                                                const ActionSchema& schema, Role role,
                                                std::vector<std::string>* skipped = nullptr);

}  // namespace actsem
