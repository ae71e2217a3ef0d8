#include <iostream>

#include "verlinde/cli.hpp"

int main(int argc, char** argv) { return verlinde::cli::run(argc, argv, std::cout, std::cerr); }
