#include <csignal>
#include <string>
#include <vector>

#include "commands.hpp"

namespace {
extern "C" void on_signal(int) { pairscan::cli::request_stop(); }
}  // namespace

int main(int argc, char** argv) {
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  return pairscan::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
