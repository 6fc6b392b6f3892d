#include "lhasimoto/cli.hpp"

int main(int argc, char** argv) { return lh::cli::run(argc, argv); }
