#include <iostream>
#include <string>
#include <vector>

#include "multspec/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  const auto result = multspec::cli::run_command(args, std::cerr);
  if (!result.written_to_file) std::cout << result.report;
  return result.status;
}
