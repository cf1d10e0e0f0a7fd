#include <iostream>

#include "pacf/cli.hpp"

int main(int argc, char** argv) {
    return pacf::cli::run(argc, argv, std::cout, std::cerr);
}
