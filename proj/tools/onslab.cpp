#include "onslab/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return onslab::cli::main_entry(argc, argv, std::cout, std::cerr); }
