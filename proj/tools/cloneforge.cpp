#include <iostream>

#include "cloneforge/cli.hpp"

int main(int argc, char** argv) {
  return cloneforge::cli::run({argv, argv + argc}, std::cout, std::cerr);
}
