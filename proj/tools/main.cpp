#include "qcsim/cli.hpp"

int main(int argc, char** argv) { return qcsim::cli_main(argc, argv); }
