#include "polariton/cli.hpp"

int main(int argc, char** argv) { return polariton::cli::main_entry(argc, argv); }
