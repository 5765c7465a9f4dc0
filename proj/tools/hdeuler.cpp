#include <iostream>

#include "hdeuler/cli.hpp"

int main(int argc, char** argv) { return hdeuler::run_cli(argc, argv, std::cout, std::cerr); }
