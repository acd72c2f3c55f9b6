#include <iostream>

#include "matern/cli.hpp"

int main(int argc, char** argv) {
    return matern::run_cli(argc, argv, std::cout, std::cerr);
}
