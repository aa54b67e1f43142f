#include <iostream>

#include "fracinv/cli.hpp"

int main(int argc, char** argv) { return fracinv::cli_main(argc, argv, std::cout, std::cerr); }
