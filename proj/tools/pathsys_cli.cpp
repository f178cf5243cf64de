#include <iostream>
#include <string>
#include <vector>

#include "pathsys/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return pathsys::execute(args, std::cout, std::cerr);
}
