#pragma once

// Every emitted text file ends with "# schema <format> v1"; readers reject other versions.

#include <string>

#include "hgsts/triple.hpp"

namespace hgsts {

inline constexpr int kSchemaVersion = 1;

inline std::string schema_line(const std::string& format) {
    return "# schema " + format + " v" + std::to_string(kSchemaVersion) + "\n";
}

namespace detail {

/// True for the expected trailer, false for a non-schema line; throws on any other schema line.
inline bool consume_schema_line(const std::string& line, const std::string& format) {
    if (line.rfind("# schema", 0) != 0) return false;
    if (line != "# schema " + format + " v" + std::to_string(kSchemaVersion)) {
        throw InvalidArgument(format + ": unsupported schema line: " + line);
    }
    return true;
}

}  // namespace detail
}  // namespace hgsts
