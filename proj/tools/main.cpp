#include "sumlab/cli.hpp"

int main(int argc, char** argv) { return sumlab::cli::run(argc, argv); }
