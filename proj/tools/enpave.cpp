#include <iostream>

#include "enpave/cli.hpp"

int main(int argc, char** argv) { return enpave::run_cli(argc, argv, std::cout, std::cerr); }
