#include <iostream>

#include "cusplab/cli.hpp"

int main(int argc, char** argv) { return cusplab::cli::run(argc, argv, std::cout, std::cerr); }
