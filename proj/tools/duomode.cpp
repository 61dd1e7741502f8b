#include <iostream>
#include <string>
#include <vector>

#include "duomode/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return duomode::cli::run(args, std::cout, std::cerr);
}
