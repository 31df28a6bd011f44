#include "actsem/llm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>
#include <thread>

#include "httplib.h"

#include "actsem/parser.hpp"
#include "actsem/render.hpp"
#include "actsem/util.hpp"

namespace actsem {

uint64_t prompt_hash(const CompletionRequest& request) {
    uint64_t h = fnv1a64(request.model);
    char temp[32];
    std::snprintf(temp, sizeof(temp), "%.6g", request.temperature);
    h = fnv1a64(temp, std::strlen(temp), h);
    for (const auto& m : request.messages) {
        h = fnv1a64("\x1e", 1, h);
        h = fnv1a64(m.role, h);
        h = fnv1a64("\x1f", 1, h);
        h = fnv1a64(m.content, h);
    }
    return h;
}

HttpBackend::HttpBackend(std::string base_url, std::string api_key)
    : base_url_(std::move(base_url)), api_key_(std::move(api_key)) {}

std::string HttpBackend::complete(const CompletionRequest& request) {
    nlohmann::json messages = nlohmann::json::array();
    for (const auto& m : request.messages)
        messages.push_back({{"role", m.role}, {"content", m.content}});
    nlohmann::json body{{"model", request.model},
                        {"messages", std::move(messages)},
                        {"temperature", request.temperature},
                        {"max_tokens", request.max_tokens}};
    const std::string payload = body.dump();

    std::string last_error;
    for (int attempt = 0; attempt <= request.retry_budget; ++attempt) {
        if (attempt > 0 && request.backoff_base_s > 0) {
            double sleep_s = request.backoff_base_s * std::pow(2.0, attempt - 1);
            std::this_thread::sleep_for(std::chrono::duration<double>(sleep_s));
        }
        httplib::Client client(base_url_);
        client.set_connection_timeout(std::chrono::duration<double>(request.timeout_s));
        client.set_read_timeout(std::chrono::duration<double>(request.timeout_s));
        httplib::Headers headers;
        if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
        auto res = client.Post("/v1/chat/completions", headers, payload, "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;  // connection failure / timeout: retryable
        }
        if (res->status >= 500) {
            last_error = "server returned status " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200)
            throw BackendError("backend returned status " + std::to_string(res->status) + ": " +
                               res->body);
        try {
            nlohmann::json reply = nlohmann::json::parse(res->body);
            return reply.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw BackendError(std::string("malformed backend response: ") + e.what());
        }
    }
    throw BackendError("exhausted " + std::to_string(request.retry_budget + 1) + " attempts (" +
                       last_error + ")");
}

ReplayBackend ReplayBackend::from_json(const nlohmann::json& pairs) {
    ReplayBackend b;
    for (const auto& item : pairs) {
        const std::string hex = item.at("prompt_hash").get<std::string>();
        uint64_t h = std::stoull(hex, nullptr, 16);
        b.buckets_[h].push_back(item.at("response").get<std::string>());
    }
    return b;
}

ReplayBackend ReplayBackend::from_file(const std::string& path) {
    // Accepts either a JSON array of {prompt_hash, response} pairs or a
    // transcript in JSONL form, from which the llm records are extracted.
    const std::string body = trim(read_file(path));
    if (!body.empty() && body.front() == '[') return from_json(nlohmann::json::parse(body));
    return from_json(replay_from_transcript(path));
}

std::string ReplayBackend::complete(const CompletionRequest& request) {
    uint64_t h = prompt_hash(request);
    auto it = buckets_.find(h);
    if (it == buckets_.end() || it->second.empty())
        throw BackendError("replay miss: no recorded response for prompt hash " + hex64(h));
    std::string response = std::move(it->second.front());
    it->second.pop_front();
    return response;
}

TranscriptLog::TranscriptLog(const std::string& path) : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open transcript for writing: " + path);
}

void TranscriptLog::append(nlohmann::json record) {
    record["seq"] = seq_++;
    out_ << record.dump() << "\n";
    out_.flush();
}

nlohmann::json replay_from_transcript(const std::string& jsonl_path) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& line : split_lines(read_file(jsonl_path))) {
        if (trim(line).empty()) continue;
        nlohmann::json record = nlohmann::json::parse(line);
        if (record.value("type", "") != "llm") continue;
        out.push_back({{"prompt_hash", record.at("prompt_hash").get<std::string>()},
                       {"response", record.at("response").get<std::string>()}});
    }
    return out;
}

LlmClient::LlmClient(Backend& backend, TranscriptLog* log, std::string model, double temperature,
                     int retry_budget, double timeout_s, double backoff_base_s)
    : backend_(backend),
      log_(log),
      model_(std::move(model)),
      temperature_(temperature),
      retry_budget_(retry_budget),
      timeout_s_(timeout_s),
      backoff_base_s_(backoff_base_s) {}

std::string LlmClient::complete(const std::vector<ChatMessage>& messages,
                                const std::string& purpose, const std::string& action) {
    CompletionRequest request;
    request.model = model_;
    request.messages = messages;
    request.temperature = temperature_;
    request.retry_budget = retry_budget_;
    request.timeout_s = timeout_s_;
    request.backoff_base_s = backoff_base_s_;
    std::string response = backend_.complete(request);
    if (log_) {
        nlohmann::json msgs = nlohmann::json::array();
        for (const auto& m : messages) msgs.push_back({{"role", m.role}, {"content", m.content}});
        nlohmann::json record{{"type", "llm"},
                              {"purpose", purpose},
                              {"prompt_hash", hex64(prompt_hash(request))},
                              {"model", model_},
                              {"temperature", temperature_},
                              {"messages", std::move(msgs)},
                              {"response", response}};
        if (!action.empty()) record["action"] = action;
        log_->append(std::move(record));
    }
    return response;
}

namespace {

// Top-level balanced "(...)" groups of a line; unbalanced tails are ignored.
std::vector<std::string> balanced_groups(const std::string& line) {
    std::vector<std::string> out;
    size_t i = 0;
    while (i < line.size()) {
        if (line[i] != '(') {
            ++i;
            continue;
        }
        int depth = 0;
        size_t j = i;
        for (; j < line.size(); ++j) {
            if (line[j] == '(') ++depth;
            if (line[j] == ')' && --depth == 0) break;
        }
        if (j >= line.size()) break;  // unbalanced
        out.push_back(line.substr(i, j - i + 1));
        i = j + 1;
    }
    return out;
}

}  // namespace

Plan parse_trajectory_response(const std::string& text, const std::set<GroundAction>& legal,
                               std::vector<std::string>* skipped) {
    Plan plan;
    for (const auto& raw : split_lines(text)) {
        std::string line = trim(raw);
        if (line.empty()) continue;
        auto groups = balanced_groups(line);
        if (groups.empty()) {
            if (skipped) skipped->push_back("no action on line: " + line);
            continue;
        }
        GroundAction action;
        bool ok = false;
        try {
            Sexpr s = read_sexpr(groups.front());
            if (!s.is_atom && !s.items.empty()) {
                ok = true;
                for (const auto& item : s.items) {
                    if (!item.is_atom) {
                        ok = false;
                        break;
                    }
                }
                if (ok) {
                    action.name = s.at(0).atom;
                    for (size_t i = 1; i < s.size(); ++i) action.args.push_back(s.at(i).atom);
                }
            }
        } catch (const ParseError&) {
            ok = false;
        }
        if (!ok || !legal.count(action)) {
            if (skipped) skipped->push_back("skipped line: " + line);
            continue;
        }
        plan.push_back(std::move(action));
    }
    return plan;
}

std::vector<Statement> parse_semantics_response(const std::string& text, const Domain& domain,
                                                const ActionSchema& schema, Role role,
                                                std::vector<std::string>* skipped) {
    std::vector<Statement> out;
    auto reject = [&](const std::string& group, const std::string& why) {
        if (skipped) skipped->push_back("dropped '" + group + "': " + why);
    };
    for (const auto& raw : split_lines(text)) {
        for (const auto& group : balanced_groups(trim(raw))) {
            Statement s;
            s.role = role;
            try {
                Sexpr node = read_sexpr(group);
                const Sexpr* body = &node;
                if (node.head_is("not")) {
                    if (node.size() != 2 || node.at(1).is_atom) {
                        reject(group, "malformed negation");
                        continue;
                    }
                    s.polarity = Polarity::negative;
                    body = &node.at(1);
                }
                if (body->is_atom || body->items.empty() || !body->at(0).is_atom) {
                    reject(group, "not a literal");
                    continue;
                }
                s.predicate = body->at(0).atom;
                bool args_ok = true;
                for (size_t i = 1; i < body->size(); ++i) {
                    if (!body->at(i).is_atom || body->at(i).atom.empty() ||
                        body->at(i).atom[0] != '?') {
                        args_ok = false;
                        break;
                    }
                    s.args.push_back(body->at(i).atom);
                }
                if (!args_ok) {
                    reject(group, "arguments must be variables");
                    continue;
                }
            } catch (const ParseError&) {
                reject(group, "unreadable");
                continue;
            }
            if (!domain.find_predicate(s.predicate)) {
                reject(group, "undeclared predicate");
                continue;
            }
            try {
                Statement canonical = canonicalize_statement(s, schema);
                validate_statement(domain, schema, canonical);
                if (std::find(out.begin(), out.end(), canonical) == out.end())
                    out.push_back(std::move(canonical));
            } catch (const std::exception& e) {
                reject(group, e.what());
            }
        }
    }
    return out;
}

}  // namespace actsem
