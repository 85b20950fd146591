#include <nullframe/cli.hpp>

#include <iostream>

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return nullframe::cli::run(args, std::cout, std::cerr);
}
