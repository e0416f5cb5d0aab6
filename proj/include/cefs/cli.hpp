#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace cefs::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_error = 1;
inline constexpr int exit_not_converged = 2;

// Environment variable naming a directory searched for relative --data paths.
inline constexpr const char* data_dir_env = "CEFS_DATA_DIR";

// Entry point shared by the executable and the tests. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "1..10", "5", "1,3,7..9". Throws cefs::InvalidArgument on malformed input.
std::vector<std::size_t> parse_k_list(const std::string& text);

}  // namespace cefs::cli
