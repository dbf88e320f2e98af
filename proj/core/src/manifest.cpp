#include "synkit/manifest.hpp"

#include "synkit/errors.hpp"
#include "synkit/version.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace synkit {

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= static_cast<std::uint64_t>(c);
        hash *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

std::string checksum_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ArgumentError("cannot open file for checksum: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return fnv1a_hex(ss.str());
}

std::string manifest_to_json(const Manifest& manifest) {
    nlohmann::json j;
    j["toolkit"] = std::string("synkit ") + kVersion;
    j["command"] = manifest.command;
    j["seed"] = manifest.seed;

    nlohmann::json config = nlohmann::json::object();
    for (const auto& [key, value] : manifest.config_echo) config[key] = value;
    j["config"] = config;

    nlohmann::json inputs = nlohmann::json::object();
    for (const auto& [name, checksum] : manifest.inputs) inputs[name] = checksum;
    j["inputs"] = inputs;

    j["outputs"] = manifest.outputs;

    nlohmann::json notes = nlohmann::json::object();
    for (const auto& [key, value] : manifest.notes) notes[key] = value;
    j["notes"] = notes;

    return j.dump(2) + "\n";
}

void write_manifest(const Manifest& manifest, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ArgumentError("cannot open file for writing: " + path);
    out << manifest_to_json(manifest);
}

}  // namespace synkit
