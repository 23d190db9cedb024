#pragma once

namespace llmc::cli {

// Full command-line front end; returns the process exit code.
// 0 = success, 1 = findings present, 2 = usage/config error, 3 = internal.
int run_cli(int argc, char** argv);

}  // namespace llmc::cli
