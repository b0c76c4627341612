#include <iostream>

#include "mott/cli.hpp"

int main(int argc, char** argv) { return mott::cli::main_entry(argc, argv, std::cout, std::cerr); }
