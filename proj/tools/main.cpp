#include <iostream>

#include "portopt/cli.hpp"

int main(int argc, char** argv) {
  return portopt::main_entry(argc, argv, std::cout, std::cerr);
}
