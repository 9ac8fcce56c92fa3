#include <iostream>

#include "trapeze/cli.hpp"

int main(int argc, char** argv) { return trapeze::cli::main(argc, argv, std::cout, std::cerr); }
