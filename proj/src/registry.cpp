#include "posers/registry.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "posers/error.hpp"

namespace posers::registry {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

RegistryEntry* Registry::find(const std::string& batch_id) {
    auto it = std::find_if(batches.begin(), batches.end(), [&](const auto& b) { return b.batch_id == batch_id; });
    return it == batches.end() ? nullptr : &*it;
}

FileLock::FileLock(const fs::path& registry, std::chrono::milliseconds timeout) {
    const auto lock_path = registry.string() + ".lock";
    fd_ = ::open(lock_path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) throw LockError("cannot open lock file " + lock_path);
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    while (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
        if (std::chrono::steady_clock::now() >= deadline) {
            ::close(fd_);
            fd_ = -1;
            throw LockError("timed out waiting for registry lock " + lock_path);
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
}

FileLock::~FileLock() {
    if (fd_ >= 0) {
        ::flock(fd_, LOCK_UN);
        ::close(fd_);
    }
}

fs::path digest_dir(const fs::path& registry) { return fs::path(registry.string() + ".d"); }

namespace {

void write_atomic(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc | std::ios::binary);
        if (!out) throw Error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw Error("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string now_utc() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

Registry parse(const std::string& text, const fs::path& path) {
    Registry reg;
    try {
        const auto j = ordered_json::parse(text);
        if (j.at("version").get<int>() != kRegistryVersion)
            throw VersionError("registry " + path.string() + ": unsupported version");
        for (const auto& b : j.at("batches")) {
            RegistryEntry e;
            e.batch_id = b.at("batch_id").get<std::string>();
            e.design_ref = b.at("design_ref").get<std::string>();
            e.products = b.at("products").get<std::vector<std::string>>();
            e.flagged = b.value("flagged", std::vector<std::string>{});
            for (const auto& r : b.at("runs"))
                e.runs.push_back({r.at("product_id").get<std::string>(), r.at("run_id").get<std::string>(),
                                  r.at("digest").get<std::string>(), r.at("timestamp").get<std::string>()});
            reg.batches.push_back(std::move(e));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("malformed registry " + path.string() + ": " + e.what());
    }
    return reg;
}

Registry load_unlocked(const fs::path& path) {
    if (!fs::exists(path)) return {};
    std::ifstream in(path);
    if (!in) throw Error("cannot read registry " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
}

void add_flag(RegistryEntry& entry, const std::string& product) {
    if (std::find(entry.flagged.begin(), entry.flagged.end(), product) == entry.flagged.end())
        entry.flagged.push_back(product);
}

}  // namespace

Registry load(const fs::path& path) { return load_unlocked(path); }

void save(const fs::path& path, const Registry& registry) {
    ordered_json j;
    j["version"] = kRegistryVersion;
    j["batches"] = ordered_json::array();
    for (const auto& e : registry.batches) {
        ordered_json b;
        b["batch_id"] = e.batch_id;
        b["design_ref"] = e.design_ref;
        b["products"] = e.products;
        b["flagged"] = e.flagged;
        b["runs"] = ordered_json::array();
        for (const auto& r : e.runs)
            b["runs"].push_back({{"product_id", r.product_id},
                                 {"run_id", r.run_id},
                                 {"digest", r.digest_file},
                                 {"timestamp", r.timestamp}});
        j["batches"].push_back(std::move(b));
    }
    write_atomic(path, j.dump(2) + "\n");
}

RegistryEntry registry_add(const fs::path& path, const std::string& batch_id, const std::string& design_ref,
                           const std::vector<std::string>& products, const Options& options) {
    if (batch_id.empty() || batch_id.find('/') != std::string::npos)
        throw ValidationError("invalid batch id '" + batch_id + "'");
    FileLock lock(path, options.lock_timeout);
    auto reg = load_unlocked(path);
    auto* entry = reg.find(batch_id);
    if (!entry) {
        reg.batches.push_back({batch_id, design_ref, {}, {}, {}});
        entry = &reg.batches.back();
    } else if (!design_ref.empty() && entry->design_ref != design_ref) {
        throw ValidationError("batch " + batch_id + " already uses design " + entry->design_ref);
    }
    std::set<std::string> seen(entry->products.begin(), entry->products.end());
    for (const auto& p : products) {
        if (p.empty() || p.find('/') != std::string::npos) throw ValidationError("invalid product id '" + p + "'");
        if (!seen.insert(p).second) throw ValidationError("duplicate product id '" + p + "' in batch " + batch_id);
        entry->products.push_back(p);
    }
    const RegistryEntry result = *entry;
    save(path, reg);
    return result;
}

RecordOutcome registry_record_run(const fs::path& path, const std::string& batch_id, const std::string& product_id,
                                  const ingest::RunDigest& digest, const Options& options) {
    FileLock lock(path, options.lock_timeout);
    auto reg = load_unlocked(path);
    auto* entry = reg.find(batch_id);
    if (!entry) throw ValidationError("unknown batch '" + batch_id + "'");
    if (std::find(entry->products.begin(), entry->products.end(), product_id) == entry->products.end())
        throw ValidationError("unknown product '" + product_id + "' in batch " + batch_id);

    RecordOutcome outcome;
    const fs::path dir = digest_dir(path);
    for (auto& other_batch : reg.batches) {
        for (const auto& run : other_batch.runs) {
            if (other_batch.batch_id == batch_id && run.product_id == product_id) continue;
            std::ifstream in(dir / run.digest_file);
            if (!in) throw Error("missing run digest " + (dir / run.digest_file).string());
            const auto other = ingest::read_run_digest(in);
            if (other.length != digest.length) continue;
            const auto shared = ingest::cross_run_shared(digest, other);
            if (shared.empty()) continue;
            outcome.findings.push_back({run.run_id, other_batch.batch_id + "/" + run.product_id, shared.size()});
            add_flag(other_batch, run.product_id);
            outcome.flagged.push_back(other_batch.batch_id + "/" + run.product_id);
        }
    }
    entry = reg.find(batch_id);
    if (!outcome.findings.empty()) {
        add_flag(*entry, product_id);
        outcome.flagged.push_back(batch_id + "/" + product_id);
    }
    std::sort(outcome.flagged.begin(), outcome.flagged.end());
    outcome.flagged.erase(std::unique(outcome.flagged.begin(), outcome.flagged.end()), outcome.flagged.end());

    const auto run_number = std::count_if(entry->runs.begin(), entry->runs.end(),
                                          [&](const RunRecord& r) { return r.product_id == product_id; }) + 1;
    const fs::path rel = fs::path(batch_id) / (product_id + "-" + std::to_string(run_number) + ".digest");
    fs::create_directories(dir / batch_id);
    std::ostringstream digest_text;
    ingest::write_run_digest(digest_text, digest);
    write_atomic(dir / rel, digest_text.str());

    entry->runs.push_back({product_id, digest.run_id, rel.string(), now_utc()});
    outcome.digest_file = rel.string();
    save(path, reg);
    return outcome;
}

std::vector<RegistryEntry> registry_list(const fs::path& path, const Options& options) {
    FileLock lock(path, options.lock_timeout);
    return load_unlocked(path).batches;
}

}  // namespace posers::registry
