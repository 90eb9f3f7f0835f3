#include "packdim/cli.hpp"

int main(int argc, char** argv) { return packdim::main_entry(argc, argv); }
