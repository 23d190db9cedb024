#include "llmc/cli/cli.hpp"

int main(int argc, char** argv) { return llmc::cli::run_cli(argc, argv); }
