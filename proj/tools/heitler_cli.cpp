#include <iostream>

#include "heitler/cli.hpp"

int main(int argc, char** argv) { return heitler::cli::main(argc, argv, std::cout, std::cerr); }
