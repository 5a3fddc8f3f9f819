#include "garmod/store.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "garmod/error.hpp"
#include "garmod/library.hpp"
#include "garmod/serialize.hpp"

namespace garmod {

namespace fs = std::filesystem;

namespace {

bool is_template(const std::string& id) { return id.rfind(kTemplatePrefix, 0) == 0; }

std::string template_name(const std::string& id) { return id.substr(std::string(kTemplatePrefix).size()); }

}  // namespace

void check_pattern_id(const std::string& id) {
    bool ok = !id.empty() && id.size() <= 64;
    for (char c : id) ok = ok && (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-');
    if (!ok) throw Error(ErrorCode::InvalidArgument, "pattern id must be 1-64 characters of [A-Za-z0-9_-]");
}

PatternStore::PatternStore(fs::path root) : root_(std::move(root)) {
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (ec) throw Error(ErrorCode::IoFailure, "cannot create store at " + root_.string() + ": " + ec.message());
}

fs::path PatternStore::root_from_env() {
    const char* env = std::getenv(kStoreEnv);
    return env && *env ? fs::path(env) : fs::path("garmod-store");
}

fs::path PatternStore::path_of(const std::string& id) const {
    check_pattern_id(id);
    return root_ / (id + ".json");
}

std::string PatternStore::create(const Pattern& p) {
    std::lock_guard<std::mutex> lock(mu_);
    int n = 1;
    std::string id;
    do {
        char buf[32];
        std::snprintf(buf, sizeof buf, "p%04d", n++);
        id = buf;
    } while (fs::exists(path_of(id)));
    save_pattern(p, path_of(id).string());
    return id;
}

void PatternStore::save(const std::string& id, const Pattern& p) {
    if (is_template(id)) throw Error(ErrorCode::ReadOnly, "templates cannot be overwritten");
    fs::path target = path_of(id);
    // Write beside the target and rename so readers never see a partial file.
    fs::path tmp = target;
    tmp += ".tmp";
    save_pattern(p, tmp.string());
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw Error(ErrorCode::IoFailure, "cannot replace " + target.string() + ": " + ec.message());
}

Pattern PatternStore::load(const std::string& id) const {
    if (is_template(id)) return make_template(template_name(id));
    return pattern_from_json(load_text(id));
}

std::string PatternStore::load_text(const std::string& id) const {
    if (is_template(id)) return to_json(make_template(template_name(id)));
    fs::path path = path_of(id);
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::NotFound, "no pattern '" + id + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

bool PatternStore::exists(const std::string& id) const {
    if (is_template(id)) {
        for (const TemplateInfo& t : template_list()) {
            if (t.name == template_name(id)) return true;
        }
        return false;
    }
    return fs::exists(path_of(id));
}

std::vector<std::string> PatternStore::list() const {
    std::vector<std::string> out;
    for (const auto& entry : fs::directory_iterator(root_)) {
        if (entry.path().extension() == ".json") out.push_back(entry.path().stem().string());
    }
    std::sort(out.begin(), out.end());
    return out;
}

void PatternStore::remove(const std::string& id) {
    if (is_template(id)) throw Error(ErrorCode::ReadOnly, "templates cannot be removed");
    if (!fs::remove(path_of(id))) throw Error(ErrorCode::NotFound, "no pattern '" + id + "'");
}

std::mutex& PatternStore::writer(const std::string& id) {
    std::lock_guard<std::mutex> lock(mu_);
    auto& slot = writers_[id];
    if (!slot) slot = std::make_unique<std::mutex>();
    return *slot;
}

}  // namespace garmod
