// Regenerates tests/data/toy: make_toy <dir>
#include <iostream>

#include "synth.hpp"

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: make_toy <dir>\n";
        return 2;
    }
    facet::test::write_toy(argv[1]);
    return 0;
}
