#include "gfm/cli.hpp"

int main(int argc, char** argv) { return gfm::cli::main(argc, argv); }
