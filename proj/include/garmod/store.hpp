#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "garmod/pattern.hpp"

namespace garmod {

inline constexpr const char* kStoreEnv = "GARMOD_STORE";
inline constexpr const char* kTemplatePrefix = "template:";

// File-backed pattern documents keyed by id. Ids of the form "template:<name>" resolve to the
// read-only template library.
class PatternStore {
public:
    explicit PatternStore(std::filesystem::path root);
    // $GARMOD_STORE, or ./garmod-store when unset.
    static std::filesystem::path root_from_env();

    const std::filesystem::path& root() const { return root_; }
    // Saves under a fresh id and returns it.
    std::string create(const Pattern& p);
    // Throws ReadOnly for template ids, InvalidArgument for malformed ids, IoFailure.
    void save(const std::string& id, const Pattern& p);
    // Throws NotFound.
    Pattern load(const std::string& id) const;
    std::string load_text(const std::string& id) const;
    bool exists(const std::string& id) const;
    std::vector<std::string> list() const;
    void remove(const std::string& id);
    // Writers on one id serialize through this mutex.
    std::mutex& writer(const std::string& id);

private:
    std::filesystem::path path_of(const std::string& id) const;

    std::filesystem::path root_;
    std::mutex mu_;
    std::map<std::string, std::unique_ptr<std::mutex>> writers_;
};

// Throws InvalidArgument unless the id is 1-64 characters of [A-Za-z0-9_-].
void check_pattern_id(const std::string& id);

}  // namespace garmod
