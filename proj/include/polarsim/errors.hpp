#pragma once

#include <stdexcept>
#include <string>

namespace polarsim {

/// Malformed or inconsistent input data (graph files, trajectory CSVs).
/// Messages carry file and line context where available. The CLI maps this
/// to exit code 2, as opposed to usage/config errors which exit 1.
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline io_error io_error_at(const std::string& file, std::size_t line, const std::string& what) {
    return io_error(file + ":" + std::to_string(line) + ": " + what);
}

}  // namespace polarsim
