#include <iostream>

#include "letf/cli.hpp"

int main(int argc, char** argv) { return letf::cli::run(argc, argv, std::cout, std::cerr); }
