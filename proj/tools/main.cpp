#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  const auto result = qdesign::cli::run(args);
  std::cerr << result.log;
  std::cout << qdesign::cli::render(result);
  return result.exit_status;
}
