#include <iostream>

#include "e3top/cli.hpp"

int main(int argc, char** argv) {
    return e3top::run_cli(argc, argv, std::cout, std::cerr);
}
