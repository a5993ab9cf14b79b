#include "lri/cli.hpp"

int main(int argc, char** argv) {
  return lri::run_cli(argc, argv);
}
