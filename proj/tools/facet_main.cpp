#include <cstdlib>
#include <iostream>

#include "facet/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::optional<std::string> seed_env;
    if (const char* v = std::getenv("FACET_SEED")) seed_env = v;
    return facet::cli::run(args, std::cout, std::cerr, seed_env);
}
