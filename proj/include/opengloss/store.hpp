#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "opengloss/model.hpp"
#include "opengloss/validate.hpp"

namespace opengloss {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Shard {
    std::filesystem::path path;
    std::int64_t entry_count = 0;     // accepted entries
    std::int64_t rejected_count = 0;  // reported separately
    std::int64_t byte_size = 0;
    std::string checksum;  // fnv1a-64 of file bytes, hex
};

// One line that failed to parse or validate. line == 0 marks a shard-level
// failure (unreadable file).
struct Rejection {
    std::filesystem::path shard;
    std::int64_t line = 0;
    std::string diagnostic;
};

using StreamItem = std::variant<LexemeEntry, Rejection>;

// FNV-1a 64-bit, hex encoded. Recorded in manifests so full-dataset runs are
// reproducible; not a cryptographic digest.
std::string fnv1a_hex(std::string_view bytes);
std::string file_checksum(const std::filesystem::path& path);

// Pull-based reader over JSONL shards; holds one entry at a time. Empty
// lines are skipped. Entries failing lenient (or the configured mode's)
// structural checks come out as rejections.
class EntryStream {
public:
    EntryStream(std::vector<std::filesystem::path> shards,
                ValidationMode mode = ValidationMode::IngestionLenient);

    // nullopt at end of all shards.
    std::optional<StreamItem> next();

    std::size_t shard_index() const { return shard_index_; }
    std::int64_t line_number() const { return line_; }

private:
    bool open_next_shard();

    std::vector<std::filesystem::path> shards_;
    ValidationMode mode_;
    std::ifstream input_;
    std::size_t shard_index_ = 0;  // 1-based while a shard is open
    std::int64_t line_ = 0;
    bool pending_open_error_ = false;
    std::string open_error_;
};

// Expands files and directories (non-recursive, *.jsonl inside directories,
// name-sorted) into a shard path list.
std::vector<std::filesystem::path> collect_shard_paths(
    const std::vector<std::filesystem::path>& inputs);

// Convenience driver: streams every shard and invokes the callbacks.
struct StreamCounts {
    std::int64_t accepted = 0;
    std::int64_t rejected = 0;
};
StreamCounts for_each_entry(const std::vector<std::filesystem::path>& shards,
                            const std::function<void(const LexemeEntry&)>& on_entry,
                            const std::function<void(const Rejection&)>& on_reject = {},
                            ValidationMode mode = ValidationMode::IngestionLenient);

struct IndexSlot {
    std::uint32_t shard = 0;    // index into the shard list
    std::int64_t ordinal = 0;   // 0-based accepted-entry ordinal within shard

    bool operator==(const IndexSlot&) const = default;
};

struct LemmaConflict {
    std::string lemma;
    IndexSlot kept;      // last wins
    IndexSlot replaced;
};

// Lemma -> location map plus the vocabulary set used for edge validity.
struct LemmaIndex {
    std::map<std::string, IndexSlot> slots;
    std::set<std::string> vocabulary;
    std::vector<LemmaConflict> conflicts;

    bool contains(const std::string& lemma) const { return vocabulary.count(lemma) > 0; }
    std::size_t size() const { return slots.size(); }
};

// Shards may be parsed by parallel workers; partial results merge in shard
// order, so the index (slots, vocabulary, conflict sequence) is identical
// for every jobs value.
LemmaIndex build_lemma_index(const std::vector<std::filesystem::path>& shards, int jobs = 1);

// Shard descriptor for one existing file (streams it once).
Shard scan_shard(const std::filesystem::path& path);

// Manifest: JSON document listing shards with checksums and counts.
void write_manifest(const std::filesystem::path& manifest_path, const std::vector<Shard>& shards);
std::vector<Shard> read_manifest(const std::filesystem::path& manifest_path);

}  // namespace opengloss
