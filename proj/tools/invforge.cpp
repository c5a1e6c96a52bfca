#include <iostream>

#include "invforge/cli.hpp"

int main(int argc, char** argv) { return invforge::cli::run(argc, argv, std::cout, std::cerr); }
