#include <string>
#include <vector>

#include "medea/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return medea::cli::run(args);
}
