#include <string>
#include <vector>

#include "npduet/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return npduet::run_cli(args);
}
