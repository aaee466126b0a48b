#include "casimir/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return casimir::cli::main_entry(argc, argv, std::cout, std::cerr);
}
