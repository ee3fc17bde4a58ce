#include <iostream>

#include "medrisk/cli.hpp"

int main(int argc, char** argv) { return medrisk::cli::run(argc, argv, std::cout, std::cerr); }
