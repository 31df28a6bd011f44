#pragma once

#include <unistd.h>

#include <deque>
#include <filesystem>
#include <string>
#include <system_error>
#include <vector>

#include "json.hpp"

#include "actsem/llm.hpp"
#include "actsem/parser.hpp"
#include "actsem/pddl.hpp"
#include "actsem/util.hpp"

namespace testutil {

inline std::string asset_path(const std::string& rel) {
    return std::string(ACTSEM_ASSET_DIR) + "/" + rel;
}

inline actsem::Domain load_domain(const std::string& name) {
    return actsem::parse_domain(actsem::read_file(asset_path(name + "/domain.pddl")));
}

inline actsem::Problem load_problem(const std::string& name, const actsem::Domain& domain) {
    return actsem::parse_problem(actsem::read_file(asset_path(name + "/p01.pddl")), domain);
}

inline const std::vector<std::string>& all_domains() {
    static const std::vector<std::string> names = {
        "barman", "blocksworld", "floortile", "grippers", "storage", "termes", "tyreworld"};
    return names;
}

inline actsem::GroundAction ga(const std::string& name, std::vector<std::string> args = {}) {
    return actsem::GroundAction{name, std::move(args)};
}

// FIFO backend for tests that script the exact call sequence; ignores the
// prompt content entirely. Records every request for later inspection.
class ScriptedBackend : public actsem::Backend {
public:
    explicit ScriptedBackend(std::vector<std::string> responses = {})
        : queue_(responses.begin(), responses.end()) {}

    void push(const std::string& response) { queue_.push_back(response); }

    std::string complete(const actsem::CompletionRequest& request) override {
        requests.push_back(request);
        if (queue_.empty()) throw actsem::BackendError("scripted backend exhausted");
        std::string r = std::move(queue_.front());
        queue_.pop_front();
        return r;
    }

    std::vector<actsem::CompletionRequest> requests;

private:
    std::deque<std::string> queue_;
};

// Unique scratch file path under the system temp dir; removed on destruction.
class TempFile {
public:
    explicit TempFile(const std::string& stem) {
        static int counter = 0;
        path = (std::filesystem::temp_directory_path() /
                ("actsem_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) +
                 "_" + stem))
                   .string();
    }
    ~TempFile() {
        std::error_code ec;
        std::filesystem::remove(path, ec);
    }
    std::string path;
};

inline void strip_wall_time(nlohmann::json& j) {
    if (j.is_object()) {
        j.erase("wall_time_s");
        for (auto& [k, v] : j.items()) strip_wall_time(v);
    } else if (j.is_array()) {
        for (auto& v : j) strip_wall_time(v);
    }
}

}  // namespace testutil
