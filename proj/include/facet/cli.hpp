#ifndef FACET_CLI_HPP
#define FACET_CLI_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace facet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitData = 1;
inline constexpr int kExitUsage = 2;

/// Runs the `facet` command line. `args` excludes the program name.
/// `seed_env` is the value of FACET_SEED, if set.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const std::optional<std::string>& seed_env = std::nullopt);

}  // namespace facet::cli

#endif
