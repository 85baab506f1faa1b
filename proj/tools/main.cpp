#include <string>
#include <vector>

#include "mesojj/run.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mesojj::cli_main(args);
}
