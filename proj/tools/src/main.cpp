#include "pcc/cli/app.hpp"

int main(int argc, char** argv) {
  pcc::cli::tune_allocator();
  return pcc::cli::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
