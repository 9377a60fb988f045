#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace vdtp {

// A stored file as the owner serves it: immutable bytes plus their CRC-32.
struct StoredFile {
    std::shared_ptr<const std::vector<uint8_t>> bytes;
    uint32_t crc32 = 0;
};

// Where the owner looks files up by the name carried in FIRQ.
class FileProvider {
  public:
    virtual ~FileProvider() = default;
    virtual std::optional<StoredFile> find(const std::string& name) = 0;
};

// Fixed set of named buffers; used by the simulator and tests.
class MemoryStore : public FileProvider {
  public:
    void add(std::string name, std::vector<uint8_t> bytes);
    void add(std::string name, std::shared_ptr<const std::vector<uint8_t>> bytes);
    void add(std::string name, StoredFile file);  // trusts file.crc32
    std::optional<StoredFile> find(const std::string& name) override;

  private:
    std::map<std::string, StoredFile> files_;
};

// Serves regular files under a root directory. Names are resolved strictly
// inside the root: absolute names and any ".." component answer not-found.
class DirectoryStore : public FileProvider {
  public:
    explicit DirectoryStore(std::filesystem::path root);
    std::optional<StoredFile> find(const std::string& name) override;

  private:
    std::filesystem::path root_;
};

}  // namespace vdtp
