#include <iostream>
#include <string>
#include <vector>

#include "cefs/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return cefs::cli::run(args, std::cout, std::cerr);
}
