#include "garmod/service.hpp"

#include <atomic>
#include <condition_variable>
#include <deque>
#include <functional>
#include <future>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "garmod/edit_api.hpp"
#include "garmod/error.hpp"
#include "garmod/library.hpp"
#include "garmod/mesh.hpp"
#include "garmod/pipeline.hpp"
#include "garmod/serialize.hpp"
#include "garmod/validate.hpp"

namespace garmod {

namespace {

using nlohmann::json;

// Fixed set of threads draining a FIFO of solver tasks.
class WorkerPool {
public:
    explicit WorkerPool(int n) {
        for (int i = 0; i < std::max(1, n); ++i) threads_.emplace_back([this] { drain(); });
    }
    ~WorkerPool() {
        {
            std::lock_guard<std::mutex> lock(mu_);
            stopping_ = true;
        }
        cv_.notify_all();
        for (std::thread& t : threads_) t.join();
    }
    std::future<void> submit(std::function<void()> fn) {
        auto task = std::make_shared<std::packaged_task<void()>>(std::move(fn));
        std::future<void> done = task->get_future();
        {
            std::lock_guard<std::mutex> lock(mu_);
            queue_.push_back([task] { (*task)(); });
        }
        cv_.notify_one();
        return done;
    }

private:
    void drain() {
        for (;;) {
            std::function<void()> fn;
            {
                std::unique_lock<std::mutex> lock(mu_);
                cv_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
                if (stopping_) return;
                fn = std::move(queue_.front());
                queue_.pop_front();
            }
            fn();
        }
    }

    std::mutex mu_;
    std::condition_variable cv_;
    std::deque<std::function<void()>> queue_;
    std::vector<std::thread> threads_;
    bool stopping_ = false;
};

struct Job {
    std::string status = "queued";  // queued, running, done, failed
    int http_status = 0;
    json result;
};

json error_body(ErrorCode code, const std::string& message) {
    return {{"error", to_string(code)}, {"message", message}};
}

void send(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

json parse_body(const httplib::Request& req) {
    if (req.body.empty()) return json::object();
    try {
        json j = json::parse(req.body);
        if (!j.is_object()) throw Error(ErrorCode::ParseError, "request body must be a JSON object");
        return j;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("request body is not JSON: ") + e.what());
    }
}

int required_revision(const json& body) {
    if (!body.contains("revision") || !body["revision"].is_number_integer()) {
        throw Error(ErrorCode::ParseError, "mutations must carry the last-seen integer revision");
    }
    return body["revision"].get<int>();
}

double number_param(const httplib::Request& req, const std::string& key, double fallback) {
    if (!req.has_param(key)) return fallback;
    const std::string v = req.get_param_value(key);
    try {
        size_t used = 0;
        double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, "query parameter " + key + " must be a number");
    }
}

ModuleSupply supply_param(const httplib::Request& req) {
    if (!req.has_param("sizes")) return default_supply();
    std::vector<int> sizes;
    std::stringstream ss(req.get_param_value("sizes"));
    for (std::string item; std::getline(ss, item, ',');) {
        double d = 0;
        try {
            d = std::stod(item);
        } catch (const std::exception&) {
            throw Error(ErrorCode::ParseError, "sizes must be a comma-separated list of integers");
        }
        sizes.push_back(static_cast<int>(d));
    }
    ModuleSupply s = ModuleSupply::unbounded(sizes);
    validate_supply(s);
    return s;
}

std::string pattern_text_of(const json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_object()) return j.dump();
    throw Error(ErrorCode::ParseError, "pattern must be a document object or its text");
}

}  // namespace

int http_status(ErrorCode code) {
    switch (code) {
    case ErrorCode::NotFound: return 404;
    case ErrorCode::ReadOnly: return 403;
    case ErrorCode::ParseError:
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidConfig:
    case ErrorCode::MissingAlignment:
    case ErrorCode::ReplayMismatch:
    case ErrorCode::TooLarge:
    case ErrorCode::PieceTooWide:
    case ErrorCode::UnknownPanel:
        return 400;
    case ErrorCode::TimeBudgetExceeded: return 504;
    case ErrorCode::IoFailure: return 500;
    default: return 422;
    }
}

struct Service::Impl {
    Impl(PatternStore& s, ServiceOptions o) : store(s), options(o), pool(o.solver_workers) {}

    PatternStore& store;
    ServiceOptions options;
    httplib::Server server;
    std::mutex jobs_mu;
    std::map<std::string, Job> jobs;
    std::atomic<int> next_job{1};
    // Last, so queued jobs stop before the job table goes away.
    WorkerPool pool;

    using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

    Handler guarded(Handler fn) {
        return [fn](const httplib::Request& req, httplib::Response& res) {
            try {
                fn(req, res);
            } catch (const Error& e) {
                send(res, http_status(e.code()), error_body(e.code(), e.detail()));
            } catch (const json::exception& e) {
                send(res, 400, error_body(ErrorCode::ParseError, e.what()));
            } catch (const std::exception& e) {
                send(res, 500, {{"error", "Internal"}, {"message", e.what()}});
            }
        };
    }

    static void conflict(httplib::Response& res, int current, int sent) {
        send(res, 409, {{"error", "RevisionConflict"}, {"revision", current},
                        {"message", "pattern is at revision " + std::to_string(current) + ", request was based on " +
                                        std::to_string(sent)}});
    }

    // Runs on the solver pool and waits; bounds concurrent solves across requests.
    void solve_on_pool(const std::function<void()>& fn) { pool.submit(fn).get(); }

    SolveOptions solve_options(double budget) const {
        SolveOptions o;
        o.time_budget_s = budget > 0 ? budget : options.default_budget_s;
        return o;
    }

    void routes() {
        server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
        server.Options(".*", [](const httplib::Request&, httplib::Response& res) {
            res.set_header("Access-Control-Allow-Methods", "GET, POST, PUT, DELETE, OPTIONS");
            res.set_header("Access-Control-Allow-Headers", "Content-Type");
            res.status = 204;
        });

        server.Get("/api/health", guarded([](const auto&, auto& res) { send(res, 200, {{"status", "ok"}}); }));

        server.Get("/api/templates", guarded([](const auto&, auto& res) {
            json out = json::array();
            for (const TemplateInfo& t : template_list()) out.push_back({{"name", t.name}, {"description", t.description}});
            send(res, 200, out);
        }));
        server.Get("/api/templates/:name", guarded([](const auto& req, auto& res) {
            res.set_content(to_json(make_template(req.path_params.at("name"))), "application/json");
        }));
        server.Get("/api/edit-kinds", guarded([](const auto&, auto& res) { send(res, 200, edit_kinds()); }));

        server.Get("/api/patterns", guarded([this](const auto&, auto& res) { send(res, 200, store.list()); }));
        server.Post("/api/patterns", guarded([this](const auto& req, auto& res) { create(req, res); }));
        server.Get("/api/patterns/:id", guarded([this](const auto& req, auto& res) {
            res.set_content(store.load_text(req.path_params.at("id")), "application/json");
        }));
        server.Get("/api/patterns/:id/grid", guarded([this](const auto& req, auto& res) {
            send(res, 200, grid_json(store.load(req.path_params.at("id"))));
        }));
        server.Put("/api/patterns/:id", guarded([this](const auto& req, auto& res) { put(req, res); }));
        server.Delete("/api/patterns/:id", guarded([this](const auto& req, auto& res) { remove(req, res); }));
        server.Post("/api/patterns/:id/edits", guarded([this](const auto& req, auto& res) { edit(req, res); }));
        server.Get("/api/patterns/:id/validate", guarded([this](const auto& req, auto& res) { validate(req, res); }));
        server.Post("/api/patterns/:id/decompose", guarded([this](const auto& req, auto& res) { decompose(req, res); }));
        server.Get("/api/jobs/:job", guarded([this](const auto& req, auto& res) { job(req, res); }));
        server.Get("/api/patterns/:id/export/svg", guarded([this](const auto& req, auto& res) { export_svg(req, res); }));
        server.Get("/api/patterns/:id/export/instructions",
                   guarded([this](const auto& req, auto& res) { export_instructions(req, res); }));
        server.Post("/api/patterns/:id/export/mesh", guarded([this](const auto& req, auto& res) { export_mesh(req, res); }));
    }

    void create(const httplib::Request& req, httplib::Response& res) {
        json body = parse_body(req);
        PatternConfig config = body.contains("config") ? config_from_json(body["config"]) : PatternConfig{};
        Pattern p;
        if (body.contains("template")) {
            p = make_template(body["template"].get<std::string>(), config);
        } else if (body.contains("pattern")) {
            p = pattern_from_json(pattern_text_of(body["pattern"]));
        } else {
            p = new_pattern(config);
        }
        std::string id = store.create(p);
        send(res, 201, {{"id", id}, {"revision", p.revision}, {"grid", grid_json(p)}});
    }

    void put(const httplib::Request& req, httplib::Response& res) {
        const std::string id = req.path_params.at("id");
        json body = parse_body(req);
        int revision = required_revision(body);
        if (!body.contains("pattern")) throw Error(ErrorCode::ParseError, "missing pattern");
        Pattern p = pattern_from_json(pattern_text_of(body["pattern"]));
        std::lock_guard<std::mutex> lock(store.writer(id));
        bool existed = store.exists(id);
        if (existed) {
            int current = store.load(id).revision;
            if (current != revision) return conflict(res, current, revision);
        }
        store.save(id, p);
        send(res, existed ? 200 : 201, {{"id", id}, {"revision", p.revision}});
    }

    void remove(const httplib::Request& req, httplib::Response& res) {
        const std::string id = req.path_params.at("id");
        int revision = static_cast<int>(number_param(req, "revision", -1));
        if (!req.has_param("revision")) throw Error(ErrorCode::ParseError, "delete must carry ?revision=");
        std::lock_guard<std::mutex> lock(store.writer(id));
        int current = store.load(id).revision;
        if (current != revision) return conflict(res, current, revision);
        store.remove(id);
        res.status = 204;
    }

    void edit(const httplib::Request& req, httplib::Response& res) {
        const std::string id = req.path_params.at("id");
        json body = parse_body(req);
        int revision = required_revision(body);
        if (!body.contains("edit")) throw Error(ErrorCode::ParseError, "missing edit");
        std::lock_guard<std::mutex> lock(store.writer(id));
        Pattern p = store.load(id);
        if (p.revision != revision) return conflict(res, p.revision, revision);
        EditOutcome out = apply_edit(p, body["edit"]);
        if (!out.accepted) {
            json err = error_body(out.reason, out.message);
            err["result"] = out.body;
            return send(res, 422, err);
        }
        store.save(id, p);
        send(res, 200, out.body);
    }

    void validate(const httplib::Request& req, httplib::Response& res) {
        Pattern p = store.load(req.path_params.at("id"));
        json list = json::array();
        for (const Violation& v : pattern_violations(p)) {
            list.push_back({{"rule", v.rule}, {"panel", v.panel}, {"seam", v.seam}, {"message", v.message}});
        }
        send(res, 200, {{"revision", p.revision}, {"valid", list.empty()}, {"violations", list}});
    }

    // Status and body of one solve, caught so async jobs report failures the same way.
    std::pair<int, json> solve(const Pattern& p, const ModuleSupply& supply, const SolveOptions& o) {
        try {
            Assembly a = solve_cover(p, supply, o);
            json out = {{"assembly", assembly_json(a, p)}, {"violations", assembly_violations(p, a, supply)}};
            return {200, out};
        } catch (const Error& e) {
            return {http_status(e.code()), error_body(e.code(), e.detail())};
        }
    }

    void decompose(const httplib::Request& req, httplib::Response& res) {
        json body = parse_body(req);
        ModuleSupply supply = body.contains("supply") ? supply_from_json(body["supply"]) : default_supply();
        SolveOptions o = solve_options(body.value("budget_s", 0.0));
        Pattern p = store.load(req.path_params.at("id"));
        if (!body.value("async", false)) {
            std::pair<int, json> r;
            solve_on_pool([&] { r = solve(p, supply, o); });
            return send(res, r.first, r.second);
        }
        std::string id = "j" + std::to_string(next_job++);
        {
            std::lock_guard<std::mutex> lock(jobs_mu);
            jobs[id] = Job{};
        }
        pool.submit([this, id, p = std::move(p), supply, o] {
            {
                std::lock_guard<std::mutex> lock(jobs_mu);
                jobs[id].status = "running";
            }
            auto [status, result] = solve(p, supply, o);
            std::lock_guard<std::mutex> lock(jobs_mu);
            Job& j = jobs[id];
            j.status = status == 200 ? "done" : "failed";
            j.http_status = status;
            j.result = std::move(result);
        });
        send(res, 202, {{"job", id}, {"status", "queued"}});
    }

    void job(const httplib::Request& req, httplib::Response& res) {
        const std::string id = req.path_params.at("job");
        std::lock_guard<std::mutex> lock(jobs_mu);
        auto it = jobs.find(id);
        if (it == jobs.end()) throw Error(ErrorCode::NotFound, "no job '" + id + "'");
        json out = {{"job", id}, {"status", it->second.status}};
        if (it->second.http_status) {
            out["http_status"] = it->second.http_status;
            out["result"] = it->second.result;
        }
        send(res, 200, out);
    }

    SheetExport sheets(const httplib::Request& req, double sheet_width) {
        Pattern p = store.load(req.path_params.at("id"));
        ModuleSupply supply = supply_param(req);
        SolveOptions o = solve_options(number_param(req, "budget_s", 0.0));
        SheetExport e;
        solve_on_pool([&] { e = export_sheets(p, supply, sheet_width, number_param(req, "sheet_length", 0.0), o); });
        return e;
    }

    void export_svg(const httplib::Request& req, httplib::Response& res) {
        if (!req.has_param("sheet_width")) throw Error(ErrorCode::ParseError, "missing sheet_width");
        SheetExport e = sheets(req, number_param(req, "sheet_width", 0.0));
        int sheet = static_cast<int>(number_param(req, "sheet", 1));
        if (sheet < 1 || sheet > static_cast<int>(e.svgs.size())) {
            throw Error(ErrorCode::InvalidArgument, "layout has " + std::to_string(e.svgs.size()) + " sheet(s)");
        }
        res.set_header("X-Sheet-Count", std::to_string(e.svgs.size()));
        res.set_header("Content-Disposition", "attachment; filename=\"" + sheet_file_name(sheet - 1) + "\"");
        res.set_content(e.svgs[static_cast<size_t>(sheet - 1)], "image/svg+xml");
    }

    void export_instructions(const httplib::Request& req, httplib::Response& res) {
        // Instructions do not depend on the sheet; any width that fits every piece will do.
        SheetExport e = sheets(req, 1e6);
        std::string format = req.has_param("format") ? req.get_param_value("format") : "json";
        if (format == "md") return res.set_content(instructions_markdown(e.steps), "text/markdown");
        if (format != "json") throw Error(ErrorCode::ParseError, "format must be json or md");
        send(res, 200, instructions_json(e.steps));
    }

    void export_mesh(const httplib::Request& req, httplib::Response& res) {
        json body = parse_body(req);
        Pattern p = store.load(req.path_params.at("id"));
        Alignment a = body.contains("alignment") ? alignment_from_json(body["alignment"], p) : drawn_alignment(p);
        MeshBundle b = build_mesh_bundle(p, a, body.value("spacing", 1.0));
        json files = json::object();
        for (auto& [name, text] : bundle_files(b)) files[name] = text;
        send(res, 200, {{"revision", p.revision}, {"threads", b.threads.size()}, {"files", files}});
    }
};

Service::Service(PatternStore& store, ServiceOptions options) : impl_(std::make_unique<Impl>(store, options)) {
    int n = std::max(1, options.http_threads);
    impl_->server.new_task_queue = [n] { return new httplib::ThreadPool(static_cast<size_t>(n)); };
    impl_->routes();
}

Service::~Service() { stop(); }

int Service::bind(const std::string& host, int port) {
    int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
    if (bound < 0) throw Error(ErrorCode::IoFailure, "cannot bind " + host + ":" + std::to_string(port));
    return bound;
}

void Service::run() { impl_->server.listen_after_bind(); }

void Service::stop() {
    if (impl_->server.is_running()) impl_->server.stop();
}

void Service::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace garmod
