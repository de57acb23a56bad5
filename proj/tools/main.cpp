#include <iostream>

#include "qgreedy/cli.hpp"

int main(int argc, char** argv) { return qgreedy::run_cli(argc, argv, std::cout, std::cerr); }
