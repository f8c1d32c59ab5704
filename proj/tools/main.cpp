#include "movingflow/cli.hpp"

int main(int argc, char** argv) { return mf::cli::main_entry(argc, argv); }
