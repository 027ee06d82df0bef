#include <iostream>

#include "imbreg/cli.hpp"

int main(int argc, char** argv) { return imbreg::run_cli(argc, argv, std::cout, std::cerr); }
