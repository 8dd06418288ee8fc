#include <iostream>

#include "nemem/cli.hpp"

int main(int argc, char** argv) { return nemem::run_cli(argc, argv, std::cout, std::cerr); }
