#include <iostream>

#include "tqent/cli.hpp"

int main(int argc, char** argv) { return tqent::cli::run(argc, argv, std::cout, std::cerr); }
