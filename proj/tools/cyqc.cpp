#include "cyqc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cyqc::run(args, std::cout, std::cerr);
}
