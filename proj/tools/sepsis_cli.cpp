#include <string>
#include <vector>

#include "sepsis/harness/commands.hpp"

int main(int argc, char** argv) {
  return sepsis::harness::run_cli(std::vector<std::string>(argv, argv + argc));
}
