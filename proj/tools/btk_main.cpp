#include "bt/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return bt::cli::run(argc, argv, std::cout, std::cerr); }
