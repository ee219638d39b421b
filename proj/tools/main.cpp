#include <iostream>

#include "filterint/cli.hpp"

int main(int argc, char** argv) {
    return filterint::cli::run(argc, argv, std::cout, std::cerr);
}
