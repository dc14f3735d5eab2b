#include "ppha/cli.hpp"

int main(int argc, char** argv) { return ppha::cli::run(argc, argv); }
