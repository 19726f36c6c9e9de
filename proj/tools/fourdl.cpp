#include "fourdl/cli.hpp"

int main(int argc, char** argv) { return fourdl::cli::run(argc, argv); }
