#pragma once

#include <openssl/evp.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sme/error.hpp"

namespace sme {

inline constexpr const char* kToolName = "sme";
inline constexpr const char* kToolVersion = "1.0.0";

/// Lowercase hex SHA-256 of a byte string.
inline std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    require(EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) == 1, "SHA-256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    require(static_cast<bool>(f), "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline std::string sha256_file(const std::string& path) { return sha256_hex(read_file(path)); }

struct ManifestFile {
    std::string name;
    std::string sha256;
};

/// Record of one run: enough to repeat it and to check the outputs.
struct Manifest {
    std::string tool = kToolName;
    std::string version = kToolVersion;
    std::string command;
    std::string study;   ///< diagnose only
    std::string config;  ///< normalized config text
    std::vector<std::pair<std::string, std::uint64_t>> seeds;
    std::vector<ManifestFile> files;
    bool passed = true;

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["tool"] = tool;
        j["version"] = version;
        j["command"] = command;
        j["study"] = study;
        j["config"] = config;
        j["seeds"] = nlohmann::ordered_json::object();
        for (const auto& [k, v] : seeds) j["seeds"][k] = v;
        j["files"] = nlohmann::ordered_json::array();
        for (const auto& f : files) j["files"].push_back({{"name", f.name}, {"sha256", f.sha256}});
        j["passed"] = passed;
        return j;
    }

    static Manifest from_json(const nlohmann::ordered_json& j) {
        Manifest m;
        try {
            m.tool = j.at("tool").get<std::string>();
            m.version = j.at("version").get<std::string>();
            m.command = j.at("command").get<std::string>();
            m.study = j.at("study").get<std::string>();
            m.config = j.at("config").get<std::string>();
            for (const auto& [k, v] : j.at("seeds").items()) m.seeds.emplace_back(k, v.get<std::uint64_t>());
            for (const auto& f : j.at("files"))
                m.files.push_back({f.at("name").get<std::string>(), f.at("sha256").get<std::string>()});
            m.passed = j.at("passed").get<bool>();
        } catch (const nlohmann::json::exception& e) {
            throw Error(std::string("malformed manifest: ") + e.what());
        }
        require(m.tool == kToolName, "manifest was not written by " + std::string(kToolName));
        return m;
    }

    void write(const std::string& path) const {
        std::ofstream f(path, std::ios::binary);
        require(static_cast<bool>(f), "cannot write manifest '" + path + "'");
        f << to_json().dump(2) << "\n";
    }

    static Manifest read(const std::string& path) {
        const std::string text = read_file(path);
        nlohmann::ordered_json j;
        try {
            j = nlohmann::ordered_json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw Error("manifest '" + path + "' is not valid JSON: " + e.what());
        }
        return from_json(j);
    }
};

/// Checksums of `names` inside `dir`.
inline std::vector<ManifestFile> checksum_files(const std::string& dir, const std::vector<std::string>& names) {
    std::vector<ManifestFile> out;
    for (const auto& n : names) out.push_back({n, sha256_file((std::filesystem::path(dir) / n).string())});
    return out;
}

/// Names of files whose checksums differ between the two lists (or are missing from `actual`).
inline std::vector<std::string> checksum_mismatches(const std::vector<ManifestFile>& expected,
                                                    const std::vector<ManifestFile>& actual) {
    std::vector<std::string> bad;
    for (const auto& e : expected) {
        auto it = std::find_if(actual.begin(), actual.end(), [&](const ManifestFile& a) { return a.name == e.name; });
        if (it == actual.end() || it->sha256 != e.sha256) bad.push_back(e.name);
    }
    for (const auto& a : actual) {
        auto it = std::find_if(expected.begin(), expected.end(), [&](const ManifestFile& e) { return a.name == e.name; });
        if (it == expected.end()) bad.push_back(a.name);
    }
    return bad;
}

} // namespace sme
