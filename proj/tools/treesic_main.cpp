#include <iostream>

#include "treesic/cli.hpp"

int main(int argc, char** argv) {
    return treesic::cli::run(argc, argv, std::cout, std::cerr);
}
