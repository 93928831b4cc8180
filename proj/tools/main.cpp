#include "pamber/cli.hpp"

int main(int argc, char** argv) { return pamber::cli::run(argc, argv); }
