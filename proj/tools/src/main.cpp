#include <iostream>

#include "hodgekit/cli.hpp"

int main(int argc, char** argv) { return hodgekit::run(argc, argv, std::cout, std::cerr); }
