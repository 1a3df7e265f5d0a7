#include <iostream>

#include "hdrband/cli.hpp"

int main(int argc, char** argv) { return hdrband::cli::run(argc, argv, std::cout, std::cerr); }
