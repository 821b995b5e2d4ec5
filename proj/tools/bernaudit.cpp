#include <iostream>

#include "bernaudit/cli.hpp"

int main(int argc, char** argv) { return bernaudit::cli::main_entry(argc, argv, std::cout, std::cerr); }
