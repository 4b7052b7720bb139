#include "cmkb/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>
#include <spdlog/spdlog.h>

#include "json_reader.hpp"

namespace cmkb {

namespace fs = std::filesystem;
using nlohmann::json;

std::string sha256_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1)
        throw StorageError("SHA-256 digest failed");
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(length * 2);
    for (unsigned int i = 0; i < length; ++i) {
        out.push_back(kHex[digest[i] >> 4]);
        out.push_back(kHex[digest[i] & 0xf]);
    }
    return out;
}

namespace {

constexpr const char* kIndexFile = "index.json";

std::string read_file(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw StorageError("cannot read " + file.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_atomic(const fs::path& file, std::string_view bytes) {
    const auto tmp = fs::path(file.string() + ".tmp");
    const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
    if (fd < 0) throw StorageError("cannot write " + tmp.string() + ": " + std::strerror(errno));
    std::size_t written = 0;
    while (written < bytes.size()) {
        const auto n = ::write(fd, bytes.data() + written, bytes.size() - written);
        if (n < 0) {
            if (errno == EINTR) continue;
            const int err = errno;
            ::close(fd);
            throw StorageError("write failed for " + tmp.string() + ": " + std::strerror(err));
        }
        written += static_cast<std::size_t>(n);
    }
    if (::fsync(fd) != 0 || ::close(fd) != 0)
        throw StorageError("cannot flush " + tmp.string() + ": " + std::strerror(errno));
    std::error_code ec;
    fs::rename(tmp, file, ec);
    if (ec) throw StorageError("cannot rename " + tmp.string() + ": " + ec.message());
}

class FileLock {
public:
    explicit FileLock(const fs::path& file) {
        fd_ = ::open(file.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
        if (fd_ < 0) throw StorageError("cannot open lock " + file.string() + ": " + std::strerror(errno));
        while (::flock(fd_, LOCK_EX) != 0) {
            if (errno != EINTR) {
                ::close(fd_);
                throw StorageError("cannot lock " + file.string() + ": " + std::strerror(errno));
            }
        }
    }
    ~FileLock() {
        ::flock(fd_, LOCK_UN);
        ::close(fd_);
    }
    FileLock(const FileLock&) = delete;
    FileLock& operator=(const FileLock&) = delete;

private:
    int fd_ = -1;
};

std::vector<SnapshotInfo> read_index(const fs::path& root) {
    const auto file = root / kIndexFile;
    if (!fs::exists(file)) return {};
    try {
        const auto document = detail::parse_json_text(read_file(file));
        detail::ObjectReader reader(document, "");
        const auto& list = detail::ObjectReader::as_array(reader.required("snapshots"), "/snapshots");
        reader.finish();
        std::vector<SnapshotInfo> out;
        for (std::size_t i = 0; i < list.size(); ++i) {
            detail::ObjectReader item(list[i], detail::pointer_index("/snapshots", i));
            SnapshotInfo info;
            const auto& version = item.required("version");
            if (!version.is_number_integer()) throw SchemaError("version must be an integer", item.child("version"));
            info.version = version.get<int>();
            info.created_at = parse_rfc3339(item.string("created_at"));
            info.checksum = item.string("checksum");
            item.finish();
            if (!out.empty() && info.version <= out.back().version)
                throw StorageError("index versions are not increasing");
            out.push_back(std::move(info));
        }
        return out;
    } catch (const StorageError&) {
        throw;
    } catch (const Error& e) {
        throw StorageError("corrupt index " + file.string() + ": " + e.what());
    }
}

std::string render_index(const std::vector<SnapshotInfo>& infos) {
    json list = json::array();
    for (const auto& info : infos) {
        list.push_back({{"version", info.version},
                        {"created_at", format_rfc3339(info.created_at)},
                        {"checksum", info.checksum}});
    }
    return canonical_dump({{"snapshots", list}});
}

std::string render_provenance(const std::vector<Provenance>& provenance) {
    json list = json::array();
    for (const auto& p : provenance) list.push_back(to_json(p));
    return canonical_dump({{"provenance", list}});
}

}  // namespace

Store::Store(fs::path root, Clock clock) : root_(std::move(root)), clock_(std::move(clock)) {}

fs::path Store::snapshot_path(int version) const {
    char name[32];
    std::snprintf(name, sizeof name, "%06d.json", version);
    return root_ / "snapshots" / name;
}

fs::path Store::provenance_path(int version) const {
    char name[48];
    std::snprintf(name, sizeof name, "%06d.provenance.json", version);
    return root_ / "snapshots" / name;
}

Snapshot Store::create(const KnowledgeBase& kb, const std::vector<Provenance>& provenance) {
    auto report = validate_kb(kb);
    if (!report.ok()) throw ValidationError(std::move(report.findings));

    std::error_code ec;
    fs::create_directories(root_ / "snapshots", ec);
    if (ec) throw StorageError("cannot create " + (root_ / "snapshots").string() + ": " + ec.message());

    FileLock lock(root_ / ".lock");
    auto index = read_index(root_);

    Snapshot snapshot;
    snapshot.version = index.empty() ? 1 : index.back().version + 1;
    snapshot.created_at = clock_();
    snapshot.document = serialize_kb(kb);
    snapshot.checksum = sha256_hex(snapshot.document);
    snapshot.provenance = provenance;

    write_atomic(snapshot_path(snapshot.version), snapshot.document);
    write_atomic(provenance_path(snapshot.version), render_provenance(provenance));
    index.push_back(snapshot.info());
    write_atomic(root_ / kIndexFile, render_index(index));
    spdlog::info("snapshot {} written ({})", snapshot.version, snapshot.checksum);
    return snapshot;
}

std::vector<SnapshotInfo> Store::list() const { return read_index(root_); }

std::optional<int> Store::latest_version() const {
    const auto index = read_index(root_);
    if (index.empty()) return std::nullopt;
    return index.back().version;
}

Snapshot Store::get(int version) const {
    const auto index = read_index(root_);
    const auto it = std::find_if(index.begin(), index.end(), [&](const auto& i) { return i.version == version; });
    if (it == index.end()) throw UnknownVersion("unknown snapshot version: " + std::to_string(version));

    Snapshot snapshot;
    snapshot.version = it->version;
    snapshot.created_at = it->created_at;
    snapshot.document = read_file(snapshot_path(version));
    snapshot.checksum = sha256_hex(snapshot.document);
    if (snapshot.checksum != it->checksum)
        throw StorageError("checksum mismatch for snapshot " + std::to_string(version));

    const auto prov_file = provenance_path(version);
    if (fs::exists(prov_file)) {
        const auto document = detail::parse_json_text(read_file(prov_file));
        for (const auto& item : document.at("provenance")) snapshot.provenance.push_back(provenance_from_json(item));
    }
    return snapshot;
}

Snapshot Store::latest() const {
    const auto version = latest_version();
    if (!version) throw EmptyStore("store " + root_.string() + " has no snapshots");
    return get(*version);
}

Diff Store::diff(int from_version, int to_version) const {
    const auto a = get(from_version);
    const auto b = get(to_version);
    auto diff = diff_documents(json::parse(a.document), json::parse(b.document));
    diff.from_version = from_version;
    diff.to_version = to_version;
    return diff;
}

}  // namespace cmkb
