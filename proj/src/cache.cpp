#include "cvdp/cache.hpp"

#include <openssl/evp.h>

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cvdp/common.hpp"

namespace fs = std::filesystem;

namespace cvdp {

namespace {

std::string digest_hex(const unsigned char* digest, unsigned len) {
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

class Sha256 {
public:
    Sha256() : ctx_(EVP_MD_CTX_new()) {
        if (!ctx_ || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1)
            throw Error(ErrorKind::Internal, "cannot initialize SHA-256");
    }
    ~Sha256() { EVP_MD_CTX_free(ctx_); }
    Sha256(const Sha256&) = delete;
    Sha256& operator=(const Sha256&) = delete;

    void update(const void* data, std::size_t len) {
        if (EVP_DigestUpdate(ctx_, data, len) != 1)
            throw Error(ErrorKind::Internal, "SHA-256 update failed");
    }

    std::string hex() {
        unsigned char digest[EVP_MAX_MD_SIZE];
        unsigned len = 0;
        if (EVP_DigestFinal_ex(ctx_, digest, &len) != 1)
            throw Error(ErrorKind::Internal, "SHA-256 finalization failed");
        return digest_hex(digest, len);
    }

private:
    EVP_MD_CTX* ctx_;
};

}  // namespace

std::string sha256_hex(std::string_view data) {
    Sha256 h;
    h.update(data.data(), data.size());
    return h.hex();
}

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open file: " + path);
    Sha256 h;
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0)
        h.update(buf, static_cast<std::size_t>(in.gcount()));
    return h.hex();
}

std::string cache_key(const std::vector<std::string>& parts) {
    Sha256 h;
    for (const auto& part : parts) {
        std::uint64_t len = part.size();
        unsigned char prefix[8];
        for (int i = 0; i < 8; ++i) prefix[i] = static_cast<unsigned char>(len >> (8 * i));
        h.update(prefix, sizeof prefix);
        h.update(part.data(), part.size());
    }
    return h.hex();
}

ArtifactCache::ArtifactCache(std::string workspace_dir) {
    fs::path root = fs::path(workspace_dir) / "cache";
    std::error_code ec;
    fs::create_directories(root, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create cache directory: " + root.string());
    root_ = root.string();
}

std::string ArtifactCache::path_for(const std::string& stage, const std::string& key) const {
    return (fs::path(root_) / stage / key).string();
}

bool ArtifactCache::contains(const std::string& stage, const std::string& key) const {
    return fs::exists(path_for(stage, key));
}

std::string ArtifactCache::ensure(const std::string& stage, const std::string& key,
                                  const std::function<void(const std::string&)>& producer) {
    fs::path final_path = path_for(stage, key);
    if (fs::exists(final_path)) return final_path.string();

    std::error_code ec;
    fs::create_directories(final_path.parent_path(), ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create cache directory: " + final_path.parent_path().string());

    static std::atomic<std::uint64_t> tmp_counter{0};
    fs::path tmp = final_path;
    tmp += ".tmp" + std::to_string(tmp_counter.fetch_add(1));
    producer(tmp.string());
    if (!fs::exists(tmp)) throw Error(ErrorKind::Internal, "cache producer wrote nothing: " + tmp.string());
    fs::rename(tmp, final_path, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot finalize cache artifact: " + final_path.string());
    return final_path.string();
}

void ArtifactCache::store(const std::string& stage, const std::string& key, const std::string& content) {
    ensure(stage, key, [&](const std::string& tmp) {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw Error(ErrorKind::Io, "cannot write cache artifact: " + tmp);
        out << content;
        if (!out.good()) throw Error(ErrorKind::Io, "cannot write cache artifact: " + tmp);
    });
}

std::optional<std::string> ArtifactCache::load(const std::string& stage, const std::string& key) const {
    std::ifstream in(path_for(stage, key), std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace cvdp
