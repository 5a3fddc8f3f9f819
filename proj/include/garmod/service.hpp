#pragma once

#include <memory>
#include <string>

#include "garmod/error.hpp"
#include "garmod/store.hpp"

namespace garmod {

struct ServiceOptions {
    double default_budget_s = 60.0;  // per solve when the request names none
    int solver_workers = 2;          // concurrent solves
    int http_threads = 8;
};

// JSON-over-HTTP front end for the pattern store and the engine.
//
//   GET    /api/health
//   GET    /api/templates                         [{name, description}]
//   GET    /api/templates/{name}                  pattern document
//   GET    /api/edit-kinds
//   GET    /api/patterns                          [ids]
//   POST   /api/patterns                          {template} | {pattern} | {config}  -> 201 {id, revision, grid}
//   GET    /api/patterns/{id}                     pattern document, byte-identical to the stored file
//   GET    /api/patterns/{id}/grid
//   PUT    /api/patterns/{id}                     {revision, pattern}
//   DELETE /api/patterns/{id}                     {revision}
//   POST   /api/patterns/{id}/edits               {revision, edit}
//   GET    /api/patterns/{id}/validate
//   POST   /api/patterns/{id}/decompose           {supply, budget_s, async}; async -> 202 {job}
//   GET    /api/jobs/{job}
//   GET    /api/patterns/{id}/export/svg          ?sheet_width&sheet_length&sheet&sizes&budget_s
//   GET    /api/patterns/{id}/export/instructions ?format=json|md&sizes&budget_s
//   POST   /api/patterns/{id}/export/mesh         {alignment, spacing} -> {files: {name: text}}
//
// Status codes: 400 malformed input, 403 template write, 404 unknown id, 409 stale revision,
// 422 edit rejected or infeasible (body {error: reason, message}), 504 solver budget exceeded.
class Service {
public:
    explicit Service(PatternStore& store, ServiceOptions options = {});
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    // Binds without serving; port 0 picks a free port. Returns the bound port. Throws IoFailure.
    int bind(const std::string& host, int port);
    // Serves until stop(); call after bind.
    void run();
    void stop();
    void wait_until_ready() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// HTTP status for an engine error code.
int http_status(ErrorCode code);

}  // namespace garmod
