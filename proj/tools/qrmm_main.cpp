#include "qrmm/cli.hpp"

int main(int argc, char** argv) {
  return qrmm::cli::run({argv + 1, argv + argc});
}
