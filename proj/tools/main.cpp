#include <iostream>

#include "ripkit/cli.hpp"

int main(int argc, char** argv) {
  return ripkit::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
