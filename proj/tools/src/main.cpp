#include "scitools/cli.hpp"

int main(int argc, char** argv) { return sci::cli::run(argc, argv); }
