#include "actsem/eval.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "actsem/parser.hpp"
#include "actsem/util.hpp"

namespace actsem {

double accuracy(const BeliefMap& predicted, const BeliefMap& truth) {
    for (const auto& [action, sem] : predicted)
        if (!truth.count(action))
            throw std::invalid_argument("prediction names unknown action: " + action);
    size_t hits = 0, total = 0;
    for (const auto& [action, true_sem] : truth) {
        const std::set<Statement> true_set = true_sem.as_set();
        total += true_set.size();
        auto it = predicted.find(action);
        if (it == predicted.end()) continue;
        for (const Statement& s : it->second.as_set()) hits += true_set.count(s);
    }
    if (total == 0) return 1.0;
    return static_cast<double>(hits) / static_cast<double>(total);
}

InductionConfig apply_variant(InductionConfig base, const std::string& variant) {
    if (variant == "default") return base;
    if (variant == "w/o prospection") {
        base.v = 0;
        return base;
    }
    if (variant == "w/o LLM-TS") {
        base.sampler = "random";
        return base;
    }
    const auto eq = variant.find('=');
    if (eq != std::string::npos && eq == 1) {
        const char axis = variant[0];
        int value = 0;
        try {
            size_t used = 0;
            value = std::stoi(variant.substr(2), &used);
            if (used != variant.size() - 2) throw std::invalid_argument(variant);
        } catch (const std::exception&) {
            throw std::invalid_argument("unknown variant: " + variant);
        }
        switch (axis) {
            case 'v': base.v = value; return base;
            case 'l': base.l = value; return base;
            case 'k': base.k = value; return base;
            case 'g': base.g = value; return base;
            default: break;
        }
    }
    throw std::invalid_argument("unknown variant: " + variant);
}

std::vector<std::string> axis_sweep_variants() {
    std::vector<std::string> out;
    for (int v : {0, 1, 5, 10}) out.push_back("v=" + std::to_string(v));
    for (int l : {1, 3, 5}) out.push_back("l=" + std::to_string(l));
    for (int k : {0, 1, 3}) out.push_back("k=" + std::to_string(k));
    for (int g : {0, 1, 5}) out.push_back("g=" + std::to_string(g));
    return out;
}

namespace {

std::string csv_number(double value) {
    if (std::floor(value) == value && std::fabs(value) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(value));
        return buf;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", value);
    return buf;
}

std::string csv_field(const std::string& value) {
    if (value.find_first_of(",\"\n") == std::string::npos) return value;
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

std::string SuiteResult::csv() const {
    std::ostringstream out;
    out << "domain,variant,seed,success,loops,NR,NES,final_acc,wall_time_s\n";
    for (const auto& r : rows) {
        out << csv_field(r.domain) << ',' << csv_field(r.variant) << ',' << csv_field(r.seed)
            << ',' << csv_number(r.success) << ',' << csv_number(r.loops) << ','
            << csv_number(r.nr) << ',' << csv_number(r.nes) << ',' << csv_number(r.final_acc)
            << ',' << csv_number(r.wall_time_s) << '\n';
    }
    return out.str();
}

nlohmann::json SuiteResult::to_json() const {
    nlohmann::json rows_json = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json row{{"domain", r.domain},   {"variant", r.variant},
                           {"seed", r.seed},       {"success", r.success},
                           {"loops", r.loops},     {"nr", r.nr},
                           {"nes", r.nes},         {"final_acc", r.final_acc},
                           {"wall_time_s", r.wall_time_s}};
        if (r.aggregate) {
            row["aggregate"] = true;
            row["nr_min"] = r.nr_min;
            row["nr_max"] = r.nr_max;
            row["nes_min"] = r.nes_min;
            row["nes_max"] = r.nes_max;
            row["acc_min"] = r.acc_min;
            row["acc_max"] = r.acc_max;
        } else {
            row["acc_per_loop"] = r.acc_per_loop;
        }
        rows_json.push_back(std::move(row));
    }
    return nlohmann::json{{"partial", partial}, {"rows", std::move(rows_json)}};
}

SuiteResult run_suite(const std::string& assets_dir, const std::vector<std::string>& domains,
                      const std::vector<std::string>& variants,
                      const std::vector<uint64_t>& seeds, const InductionConfig& base,
                      int jobs, double budget_s, const BackendFactory& make_backend) {
    struct Cell {
        std::string domain, variant;
        uint64_t seed;
    };
    std::vector<Cell> cells;
    for (const auto& d : domains)
        for (const auto& v : variants)
            for (uint64_t s : seeds) cells.push_back({d, v, s});
    // Reject bad variant names before any work starts.
    for (const auto& v : variants) apply_variant(base, v);

    std::map<std::string, std::pair<Domain, Problem>> assets;
    for (const auto& d : domains) {
        if (assets.count(d)) continue;
        Domain dom = parse_domain(read_file(assets_dir + "/" + d + "/domain.pddl"));
        Problem prob = parse_problem(read_file(assets_dir + "/" + d + "/p01.pddl"), dom);
        assets.emplace(d, std::make_pair(std::move(dom), std::move(prob)));
    }

    struct Outcome {
        bool ran = false;
        RunReport report;
        std::exception_ptr error;
    };
    std::vector<Outcome> outcomes(cells.size());
    std::atomic<size_t> next{0};
    const auto t0 = std::chrono::steady_clock::now();

    auto worker = [&]() {
        for (;;) {
            if (budget_s > 0.0) {
                const double elapsed =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                if (elapsed > budget_s) return;
            }
            const size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            const Cell& cell = cells[i];
            try {
                InductionConfig cfg = apply_variant(base, cell.variant);
                cfg.seed = cell.seed;
                std::unique_ptr<Backend> backend;
                InductionRun io;
                if (make_backend) {
                    backend = make_backend(cell.domain, cell.variant, cell.seed);
                    io.backend = backend.get();
                }
                const auto& [dom, prob] = assets.at(cell.domain);
                outcomes[i].report = run_induction(dom, dom, prob, cfg, io);
                outcomes[i].ran = true;
            } catch (...) {
                outcomes[i].error = std::current_exception();
                return;
            }
        }
    };

    const int n_threads = std::max(1, jobs);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(n_threads));
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    for (const auto& o : outcomes)
        if (o.error) std::rethrow_exception(o.error);

    SuiteResult result;
    size_t cell_index = 0;
    for (const auto& d : domains) {
        for (const auto& v : variants) {
            std::vector<const Outcome*> ran;
            for (size_t s = 0; s < seeds.size(); ++s, ++cell_index) {
                const Outcome& o = outcomes[cell_index];
                if (!o.ran) continue;
                ran.push_back(&o);
                SuiteRow row;
                row.domain = d;
                row.variant = v;
                row.seed = std::to_string(seeds[s]);
                row.success = o.report.success ? 1.0 : 0.0;
                row.loops = o.report.loops_used;
                row.nr = o.report.nr;
                row.nes = o.report.nes;
                row.final_acc = o.report.final_acc;
                row.wall_time_s = o.report.wall_time_s;
                row.acc_per_loop = o.report.acc_per_loop;
                result.rows.push_back(std::move(row));
            }
            if (ran.empty()) continue;
            SuiteRow agg;
            agg.domain = d;
            agg.variant = v;
            agg.seed = "aggregate";
            agg.aggregate = true;
            agg.nr_min = agg.nes_min = agg.acc_min = 1e300;
            agg.nr_max = agg.nes_max = agg.acc_max = -1e300;
            for (const Outcome* o : ran) {
                agg.success += o->report.success ? 1.0 : 0.0;
                agg.loops += o->report.loops_used;
                agg.nr += o->report.nr;
                agg.nes += o->report.nes;
                agg.final_acc += o->report.final_acc;
                agg.wall_time_s += o->report.wall_time_s;
                agg.nr_min = std::min(agg.nr_min, static_cast<double>(o->report.nr));
                agg.nr_max = std::max(agg.nr_max, static_cast<double>(o->report.nr));
                agg.nes_min = std::min(agg.nes_min, static_cast<double>(o->report.nes));
                agg.nes_max = std::max(agg.nes_max, static_cast<double>(o->report.nes));
                agg.acc_min = std::min(agg.acc_min, o->report.final_acc);
                agg.acc_max = std::max(agg.acc_max, o->report.final_acc);
            }
            const double m = static_cast<double>(ran.size());
            agg.success /= m;
            agg.loops /= m;
            agg.nr /= m;
            agg.nes /= m;
            agg.final_acc /= m;
            agg.wall_time_s /= m;
            result.rows.push_back(std::move(agg));
        }
    }
    for (const auto& o : outcomes)
        if (!o.ran) result.partial = true;
    return result;
}

}  // namespace actsem
