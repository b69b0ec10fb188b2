#include <iostream>

#include "sqpm/cli.hpp"

int main(int argc, char** argv) { return sqpm::cli::run(argc, argv, std::cout, std::cerr); }
