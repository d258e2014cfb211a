#include "fracmt/cli.hpp"

int main(int argc, char** argv) { return fracmt::cli::run(argc, argv); }
