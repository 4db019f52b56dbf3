#include <iostream>

#include "gibbsent/cli.hpp"

int main(int argc, char** argv) { return gibbsent::cli::main_entry(argc, argv, std::cout, std::cerr); }
