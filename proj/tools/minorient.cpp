#include <iostream>

#include "minorient/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return minorient::run_cli(args, std::cout, std::cerr);
}
