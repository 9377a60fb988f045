#include "vdtp/file_store.hpp"

#include <fstream>

#include "vdtp/crc32.hpp"

namespace vdtp {

void MemoryStore::add(std::string name, std::vector<uint8_t> bytes) {
    add(std::move(name), std::make_shared<const std::vector<uint8_t>>(std::move(bytes)));
}

void MemoryStore::add(std::string name, std::shared_ptr<const std::vector<uint8_t>> bytes) {
    StoredFile f;
    f.crc32 = crc32_of(bytes->data(), bytes->size());
    f.bytes = std::move(bytes);
    files_[std::move(name)] = std::move(f);
}

void MemoryStore::add(std::string name, StoredFile file) {
    files_[std::move(name)] = std::move(file);
}

std::optional<StoredFile> MemoryStore::find(const std::string& name) {
    auto it = files_.find(name);
    if (it == files_.end()) return std::nullopt;
    return it->second;
}

DirectoryStore::DirectoryStore(std::filesystem::path root) : root_(std::move(root)) {}

std::optional<StoredFile> DirectoryStore::find(const std::string& name) {
    namespace fs = std::filesystem;
    fs::path rel(name);
    if (rel.is_absolute()) return std::nullopt;
    for (const auto& part : rel) {
        if (part == "..") return std::nullopt;
    }
    fs::path full = root_ / rel;
    std::error_code ec;
    if (!fs::is_regular_file(full, ec) || ec) return std::nullopt;

    std::ifstream in(full, std::ios::binary);
    if (!in) return std::nullopt;
    auto size = fs::file_size(full, ec);
    if (ec) return std::nullopt;
    auto bytes = std::make_shared<std::vector<uint8_t>>(size);
    if (size > 0 && !in.read(reinterpret_cast<char*>(bytes->data()), static_cast<std::streamsize>(size))) {
        return std::nullopt;
    }
    StoredFile f;
    f.crc32 = crc32_of(bytes->data(), bytes->size());
    f.bytes = std::move(bytes);
    return f;
}

}  // namespace vdtp
