#include "opengloss/store.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "opengloss/json_io.hpp"
#include "opengloss/normalize.hpp"

namespace opengloss {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string file_checksum(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::uint64_t h = 14695981039346656037ULL;
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ULL;
        }
    }
    char out[17];
    std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
    return out;
}

EntryStream::EntryStream(std::vector<fs::path> shards, ValidationMode mode)
    : shards_(std::move(shards)), mode_(mode) {}

bool EntryStream::open_next_shard() {
    while (shard_index_ < shards_.size()) {
        const fs::path& path = shards_[shard_index_];
        ++shard_index_;
        line_ = 0;
        input_.close();
        input_.clear();
        input_.open(path, std::ios::binary);
        if (!input_) {
            pending_open_error_ = true;
            open_error_ = "cannot open " + path.string();
            return true;  // caller emits the rejection, then moves on
        }
        return true;
    }
    return false;
}

std::optional<StreamItem> EntryStream::next() {
    for (;;) {
        if (pending_open_error_) {
            pending_open_error_ = false;
            return Rejection{shards_[shard_index_ - 1], 0, open_error_};
        }
        if (shard_index_ == 0 || !input_.is_open()) {
            if (!open_next_shard()) return std::nullopt;
            continue;
        }
        std::string line;
        if (!std::getline(input_, line)) {
            input_.close();
            if (!open_next_shard()) return std::nullopt;
            continue;
        }
        ++line_;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const fs::path& path = shards_[shard_index_ - 1];
        try {
            LexemeEntry entry = parse_entry(line);
            ValidationOutcome outcome = validate_entry(entry, mode_);
            if (!outcome.ok()) {
                std::string diag = "validation failed:";
                for (const auto& issue : outcome.issues) {
                    if (issue.severity == Severity::Error) {
                        diag += " [" + issue.field + "] " + issue.message + ";";
                    }
                }
                return Rejection{path, line_, diag};
            }
            return entry;
        } catch (const ParseError& e) {
            return Rejection{path, line_,
                             std::string(e.what()) + " (byte " + std::to_string(e.byte_offset) + ")"};
        } catch (const std::exception& e) {
            return Rejection{path, line_, e.what()};
        }
    }
}

std::vector<fs::path> collect_shard_paths(const std::vector<fs::path>& inputs) {
    std::vector<fs::path> out;
    for (const auto& input : inputs) {
        std::error_code ec;
        if (fs::is_directory(input, ec)) {
            std::vector<fs::path> found;
            for (const auto& e : fs::directory_iterator(input, ec)) {
                if (e.is_regular_file() && e.path().extension() == ".jsonl") {
                    found.push_back(e.path());
                }
            }
            std::sort(found.begin(), found.end());
            out.insert(out.end(), found.begin(), found.end());
        } else {
            out.push_back(input);
        }
    }
    return out;
}

StreamCounts for_each_entry(const std::vector<fs::path>& shards,
                            const std::function<void(const LexemeEntry&)>& on_entry,
                            const std::function<void(const Rejection&)>& on_reject,
                            ValidationMode mode) {
    EntryStream stream(shards, mode);
    StreamCounts counts;
    while (auto item = stream.next()) {
        if (auto* entry = std::get_if<LexemeEntry>(&*item)) {
            ++counts.accepted;
            if (on_entry) on_entry(*entry);
        } else {
            ++counts.rejected;
            if (on_reject) on_reject(std::get<Rejection>(*item));
        }
    }
    return counts;
}

LemmaIndex build_lemma_index(const std::vector<fs::path>& shards, int jobs) {
    // Workers collect each shard's accepted lemmas in order; the merge below
    // replays them shard by shard, so the result is independent of jobs.
    std::vector<std::vector<std::string>> per_shard(shards.size());
    auto scan = [&](std::size_t i) {
        for_each_entry({shards[i]},
                       [&](const LexemeEntry& entry) { per_shard[i].push_back(entry.lemma); });
    };
    if (jobs <= 1 || shards.size() <= 1) {
        for (std::size_t i = 0; i < shards.size(); ++i) scan(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::size_t worker_count = std::min(static_cast<std::size_t>(jobs), shards.size());
        std::vector<std::thread> workers;
        workers.reserve(worker_count);
        for (std::size_t w = 0; w < worker_count; ++w) {
            workers.emplace_back([&]() {
                for (;;) {
                    std::size_t i = next.fetch_add(1);
                    if (i >= shards.size()) return;
                    scan(i);
                }
            });
        }
        for (auto& t : workers) t.join();
    }

    LemmaIndex index;
    for (std::size_t shard = 0; shard < per_shard.size(); ++shard) {
        for (std::size_t ordinal = 0; ordinal < per_shard[shard].size(); ++ordinal) {
            const std::string& lemma = per_shard[shard][ordinal];
            IndexSlot slot{static_cast<std::uint32_t>(shard),
                           static_cast<std::int64_t>(ordinal)};
            auto [it, inserted] = index.slots.try_emplace(lemma, slot);
            if (!inserted) {
                // Duplicate lemma: upstream anomaly, not a failure. Last wins.
                index.conflicts.push_back({lemma, slot, it->second});
                it->second = slot;
            }
            index.vocabulary.insert(lemma);
        }
    }
    return index;
}

Shard scan_shard(const fs::path& path) {
    Shard shard;
    shard.path = path;
    std::error_code ec;
    auto size = fs::file_size(path, ec);
    if (ec) throw IoError("cannot stat " + path.string() + ": " + ec.message());
    shard.byte_size = static_cast<std::int64_t>(size);
    shard.checksum = file_checksum(path);
    StreamCounts counts = for_each_entry({path}, {}, {});
    shard.entry_count = counts.accepted;
    shard.rejected_count = counts.rejected;
    return shard;
}

void write_manifest(const fs::path& manifest_path, const std::vector<Shard>& shards) {
    json doc = json::object();
    json arr = json::array();
    for (const auto& s : shards) {
        arr.push_back({{"path", s.path.string()},
                       {"entries", s.entry_count},
                       {"rejected", s.rejected_count},
                       {"bytes", s.byte_size},
                       {"checksum", s.checksum}});
    }
    doc["shards"] = std::move(arr);
    std::ofstream out(manifest_path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + manifest_path.string());
    out << doc.dump(2) << '\n';
}

std::vector<Shard> read_manifest(const fs::path& manifest_path) {
    std::ifstream in(manifest_path, std::ios::binary);
    if (!in) throw IoError("cannot open " + manifest_path.string());
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("shards") ||
        !doc["shards"].is_array()) {
        throw IoError("malformed manifest " + manifest_path.string());
    }
    std::vector<Shard> shards;
    for (const auto& s : doc["shards"]) {
        Shard shard;
        shard.path = s.value("path", "");
        shard.entry_count = s.value("entries", 0);
        shard.rejected_count = s.value("rejected", 0);
        shard.byte_size = s.value("bytes", 0);
        shard.checksum = s.value("checksum", "");
        shards.push_back(std::move(shard));
    }
    return shards;
}

}  // namespace opengloss
