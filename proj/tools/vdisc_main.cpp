#include "vdisc/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return vdisc::run_cli(argc, argv, std::cout, std::cerr); }
