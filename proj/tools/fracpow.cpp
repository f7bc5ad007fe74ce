#include <iostream>

#include "fracpow/cli.hpp"

int main(int argc, char** argv) {
  return fracpow::cli::main_entry(argc, argv, std::cout, std::cerr);
}
