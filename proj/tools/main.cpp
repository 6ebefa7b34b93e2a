#include <iostream>

#include "imcpack/cli.hpp"

int main(int argc, char** argv) { return imcpack::run_cli(argc, argv, std::cout, std::cerr); }
