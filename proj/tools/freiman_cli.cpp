#include "freiman/cli.hpp"

int main(int argc, char** argv) { return freiman::cli::main(argc, argv); }
