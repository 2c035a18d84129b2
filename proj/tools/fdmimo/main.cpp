#include <iostream>

#include "fdmimo/commands.hpp"

int main(int argc, char** argv) {
  return fdmimo::cli::run(argc, argv, std::cout, std::cerr);
}
