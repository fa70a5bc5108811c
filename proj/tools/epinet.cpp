#include <iostream>

#include "epinet/cli.hpp"

int main(int argc, char** argv) { return epinet::cli::run(argc, argv, std::cout, std::cerr); }
