#include <iostream>

#include "svlab/cli.hpp"

int main(int argc, char** argv) { return svlab::run_cli(argc, argv, std::cout, std::cerr); }
