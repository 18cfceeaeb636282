#include <iostream>

#include "posers/cli.hpp"

int main(int argc, char** argv) { return posers::cli::run(argc, argv, std::cout, std::cerr); }
