#include "bilinrank/cli.hpp"

int main(int argc, char** argv) { return bilinrank::cli::cli_dispatch(argc, argv); }
