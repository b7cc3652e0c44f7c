#include "capres/cli.hpp"

int main(int argc, char** argv) { return capres::cli::run(argc, argv); }
