#ifndef IVFS_CLI_HPP
#define IVFS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace ivfs::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Entry point behind the `ivfs` executable; `args` excludes the program name.
/// Subcommands: select, evaluate, benchmark, stability, diagram.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

/// Reads a flat "key = value" file into command-line tokens. Keys already
/// present in `explicit_args` are skipped so the command line wins.
std::vector<std::string> config_file_args(const std::string& path, const std::vector<std::string>& explicit_args);

}  // namespace ivfs::cli

#endif  // IVFS_CLI_HPP
