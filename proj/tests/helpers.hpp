#pragma once

// Shared utilities for the test suite: temp directories, file helpers,
// random fixture generation, and tolerant float comparison.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "core/rng.hpp"
#include "core/types.hpp"

namespace testutil {

// Unique scratch directory, removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<uint64_t> counter{0};
        auto base = std::filesystem::temp_directory_path();
        uint64_t id = counter.fetch_add(1);
        path_ = base / ("divkit_test_" + std::to_string(::getpid()) + "_" + std::to_string(id));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path_ / name).string(); }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Hand-rolled EMB1 writer, independent of the library serializer.
inline std::string emb1_bytes(uint32_t count, uint32_t dim, const std::vector<float>& data) {
    std::string out;
    out.reserve(16 + data.size() * 4);
    out += "EMB1";
    auto put_u32 = [&](uint32_t v) {
        for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    };
    put_u32(count);
    put_u32(dim);
    put_u32(0);
    for (float f : data) {
        uint32_t bits;
        static_assert(sizeof(bits) == sizeof(f));
        std::memcpy(&bits, &f, 4);
        put_u32(bits);
    }
    return out;
}

// Random embedding matrix with entries in [lo, hi).
inline divkit::EmbeddingMatrix make_matrix(size_t count, size_t dim, uint64_t seed,
                                           double lo = -1.0, double hi = 1.0) {
    divkit::rng r(divkit::mix64(seed, 0x7465737431ULL));
    divkit::EmbeddingMatrix m;
    m.count = count;
    m.dim = dim;
    m.data.resize(count * dim);
    for (auto& v : m.data) v = static_cast<float>(lo + (hi - lo) * r.next_double());
    return m;
}

inline divkit::EmbeddingMatrix matrix_from(std::vector<std::vector<double>> rows) {
    divkit::EmbeddingMatrix m;
    m.count = rows.size();
    m.dim = rows.empty() ? 0 : rows[0].size();
    m.data.reserve(m.count * m.dim);
    for (const auto& row : rows)
        for (double v : row) m.data.push_back(static_cast<float>(v));
    return m;
}

// Gaussian blob helper for clustering fixtures.
inline divkit::EmbeddingMatrix gaussian_blobs(const std::vector<std::vector<double>>& centers,
                                              size_t per_center, double sd, uint64_t seed) {
    divkit::rng r(divkit::mix64(seed, 0x626c6f62ULL));
    divkit::EmbeddingMatrix m;
    m.dim = centers.empty() ? 0 : centers[0].size();
    m.count = centers.size() * per_center;
    m.data.reserve(m.count * m.dim);
    for (const auto& c : centers)
        for (size_t i = 0; i < per_center; ++i)
            for (double mu : c) m.data.push_back(static_cast<float>(mu + sd * r.next_normal()));
    return m;
}

inline bool close(double a, double b, double rel = 1e-9, double abs = 1e-12) {
    if (std::isinf(a) || std::isinf(b)) return a == b;
    double diff = std::fabs(a - b);
    if (diff <= abs) return true;
    return diff <= rel * std::max(std::fabs(a), std::fabs(b));
}

} // namespace testutil
