#include <vector>

#include "cavent/cli.hpp"

int main(int argc, char** argv) {
  return cavent::cli::parse_and_dispatch(
      std::vector<std::string>(argv + 1, argv + argc));
}
