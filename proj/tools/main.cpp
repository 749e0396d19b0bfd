#include "capround/cli.hpp"

int main(int argc, char** argv) { return capround::run_cli(argc, argv); }
