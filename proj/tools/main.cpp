#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return hdgc::cli::run(argc, argv, std::cout, std::cerr);
}
