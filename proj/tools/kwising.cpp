#include <iostream>
#include <string>
#include <vector>

#include "kw/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return kw::cli::run(std::move(args), {std::cin, std::cout, std::cerr});
}
