#include "dwsync/cli.hpp"

int main(int argc, char** argv) { return dwsync::run_cli(argc, argv); }
