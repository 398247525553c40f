#include <iostream>
#include <string>
#include <vector>

#include "n3/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return n3::run_cli(args, std::cout, std::cerr);
}
