#include "hlds/cli.hpp"

int main(int argc, char** argv) { return hlds::cli::main(argc, argv); }
