#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return salmon::cli_run({argv, argv + argc}, std::cout, std::cerr); }
