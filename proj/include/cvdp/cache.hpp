#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cvdp {

// Hex-encoded SHA-256 of a byte string.
std::string sha256_hex(std::string_view data);

// Hex-encoded SHA-256 of a file's contents. Throws ErrorKind::Io if unreadable.
std::string sha256_file(const std::string& path);

// Combines labelled parts into a single key. Each part is length-prefixed
// before hashing so distinct part lists never collide by concatenation.
std::string cache_key(const std::vector<std::string>& parts);

// Content-addressed artifact store rooted at <workspace>/cache.
// Artifacts live at <workspace>/cache/<stage>/<key>; writes go through a
// temporary file and an atomic rename so a crashed run never leaves a
// partial artifact behind.
class ArtifactCache {
public:
    explicit ArtifactCache(std::string workspace_dir);

    const std::string& root() const { return root_; }

    std::string path_for(const std::string& stage, const std::string& key) const;
    bool contains(const std::string& stage, const std::string& key) const;

    // Returns the artifact path, invoking producer(tmp_path) first if the
    // artifact is missing. producer must create tmp_path; it is then renamed
    // into place.
    std::string ensure(const std::string& stage, const std::string& key,
                       const std::function<void(const std::string&)>& producer);

    // Convenience wrappers for whole-string artifacts.
    void store(const std::string& stage, const std::string& key, const std::string& content);
    std::optional<std::string> load(const std::string& stage, const std::string& key) const;

private:
    std::string root_;
};

}  // namespace cvdp
