#include <iostream>

#include "cli/run.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return liouville::cli::run(args, std::cout, std::cerr);
}
