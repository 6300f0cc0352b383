#include "pps/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return pps::run_cli(argc, argv, std::cout, std::cerr); }
