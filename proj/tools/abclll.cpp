#include <string>
#include <vector>

#include "abclll/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return abclll::run_cli(args);
}
