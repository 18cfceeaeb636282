#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include "posers/auth.hpp"
#include "posers/ingest.hpp"

namespace posers::registry {

inline constexpr int kRegistryVersion = 1;

struct RunRecord {
    std::string product_id;
    std::string run_id;
    std::string digest_file;  // relative to the digest directory
    std::string timestamp;
};

struct RegistryEntry {
    std::string batch_id;
    std::string design_ref;
    std::vector<std::string> products;
    std::vector<RunRecord> runs;
    std::vector<std::string> flagged;  // products sharing sequences with another product's run
};

struct Registry {
    std::vector<RegistryEntry> batches;

    RegistryEntry* find(const std::string& batch_id);
};

/// Exclusive advisory lock on "<registry>.lock", released on destruction.
class FileLock {
public:
    FileLock(const std::filesystem::path& registry, std::chrono::milliseconds timeout);
    ~FileLock();
    FileLock(const FileLock&) = delete;
    FileLock& operator=(const FileLock&) = delete;

private:
    int fd_ = -1;
};

/// "<registry>.d": one sub-directory per batch holding run digests.
std::filesystem::path digest_dir(const std::filesystem::path& registry);

/// An absent file reads as an empty registry.
Registry load(const std::filesystem::path& path);
/// Writes to a temporary file and renames it over `path`.
void save(const std::filesystem::path& path, const Registry& registry);

struct Options {
    std::chrono::milliseconds lock_timeout{10'000};
};

/// Creates the batch or extends its product list. Throws ValidationError on a
/// duplicate product id.
RegistryEntry registry_add(const std::filesystem::path& path, const std::string& batch_id,
                           const std::string& design_ref, const std::vector<std::string>& products,
                           const Options& options = {});

struct RecordOutcome {
    std::vector<auth::CrossRunFinding> findings;
    std::vector<std::string> flagged;  // "batch/product" of every product involved
    std::string digest_file;
};

/// Stores the digest of a run for a registered product and intersects it with
/// every stored run of every other product.
RecordOutcome registry_record_run(const std::filesystem::path& path, const std::string& batch_id,
                                  const std::string& product_id, const ingest::RunDigest& digest,
                                  const Options& options = {});

std::vector<RegistryEntry> registry_list(const std::filesystem::path& path, const Options& options = {});

}  // namespace posers::registry
