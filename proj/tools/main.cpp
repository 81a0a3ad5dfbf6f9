#include <iostream>

#include "ncma/cli.hpp"

int main(int argc, char** argv) { return ncma::cli::run(argc, argv, std::cout, std::cerr); }
