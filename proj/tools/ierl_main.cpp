#include <iostream>

#include "ierl/cli.hpp"

int main(int argc, char** argv) { return ierl::cli::run(argc, argv, std::cout, std::cerr); }
