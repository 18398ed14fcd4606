#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace cmcs {

std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

/// Provenance block embedded in (or prefixed to) every output file. All
/// fields are derived from the run's inputs, so identical inputs and seed
/// reproduce byte-identical outputs; the timestamp records the input data's
/// date span rather than wall clock.
struct RunManifest {
    std::string command;
    std::string config_digest;  // fnv1a-64 over the input contents
    std::uint64_t seed = 0;
    std::string version;
    std::string data_window;  // e.g. "2020-01-25..2020-02-25"

    std::string to_json() const;
    /// "# manifest: {...}" comment line for CSV outputs.
    std::string comment_line() const;
};

}  // namespace cmcs
