#include "cli.hpp"

int main(int argc, char** argv) { return ipspace::cli::main(argc, argv); }
