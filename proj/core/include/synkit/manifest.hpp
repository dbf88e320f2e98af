#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace synkit {

// Reproducibility record written next to every command's outputs: the
// resolved config, seeds, input checksums and produced files. Contains no
// timestamps or absolute paths, so identical runs write identical manifests.
struct Manifest {
    std::string command;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> config_echo;
    std::vector<std::pair<std::string, std::string>> inputs;  // name -> checksum
    std::vector<std::string> outputs;
    std::map<std::string, std::string> notes;
};

// FNV-1a 64-bit, hex-encoded.
std::string fnv1a_hex(const std::string& bytes);
std::string checksum_file(const std::string& path);

std::string manifest_to_json(const Manifest& manifest);
void write_manifest(const Manifest& manifest, const std::string& path);

}  // namespace synkit
