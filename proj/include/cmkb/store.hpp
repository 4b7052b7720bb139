#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cmkb/curation.hpp"
#include "cmkb/diff.hpp"
#include "cmkb/model.hpp"
#include "cmkb/time.hpp"

namespace cmkb {

struct SnapshotInfo {
    int version = 0;
    Timestamp created_at{};
    std::string checksum;

    bool operator==(const SnapshotInfo&) const = default;
};

struct Snapshot {
    int version = 0;
    Timestamp created_at{};
    std::string document;  // canonical KB bytes
    std::string checksum;  // SHA-256 of `document`, lowercase hex
    std::vector<Provenance> provenance;

    KnowledgeBase kb() const { return parse_kb(document); }
    SnapshotInfo info() const { return {version, created_at, checksum}; }
};

std::string sha256_hex(std::string_view bytes);

// Append-only directory of canonical snapshots:
//   <root>/snapshots/000001.json             canonical KB document
//   <root>/snapshots/000001.provenance.json  provenance records
//   <root>/index.json                        version, created_at, checksum
// Writers hold an exclusive lock on <root>/.lock; readers take no lock since
// every file is written to a temporary name and renamed into place.
class Store {
public:
    explicit Store(std::filesystem::path root, Clock clock = system_clock());

    const std::filesystem::path& root() const { return root_; }

    // Throws ValidationError (store untouched) or StorageError.
    Snapshot create(const KnowledgeBase& kb, const std::vector<Provenance>& provenance = {});

    Snapshot get(int version) const;  // UnknownVersion
    Snapshot latest() const;          // EmptyStore
    std::optional<int> latest_version() const;
    std::vector<SnapshotInfo> list() const;
    Diff diff(int from_version, int to_version) const;  // UnknownVersion

private:
    std::filesystem::path snapshot_path(int version) const;
    std::filesystem::path provenance_path(int version) const;

    std::filesystem::path root_;
    Clock clock_;
};

}  // namespace cmkb
