#include <iostream>
#include <string>
#include <vector>

#include "quatquad/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return quatquad::run_cli(std::move(args), std::cout, std::cerr);
}
