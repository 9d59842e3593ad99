#include "cli.hpp"

int main(int argc, char** argv) { return omac::cli::run(argc, argv); }
