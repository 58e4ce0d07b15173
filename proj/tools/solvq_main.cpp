#include <string>
#include <vector>

#include "solvq/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return solvq::run_cli(args);
}
